// SPDX-License-Identifier: Apache-2.0

//! Run configuration: flat `section.key=value` lines, `#` comments.
//!
//! ```text
//! model.eta=0.1,0.2
//! model.q=1000
//! run.n_max=20
//! omega.points=300
//! ```
//!
//! Lists are comma separated. Rationals accept `0.1`, `1e-3` and `1/6`.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use rug::Rational;

use crate::error::{Error, Result};
use crate::lindblad::IsingParams;
use crate::scalar::{parse_rational, DEFAULT_PRECISION};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    IsingLanczos,
    Syk,
    Toy,
    Ratio,
    Spectral,
}

impl Command {
    pub const ALL: [Command; 5] = [Self::IsingLanczos, Self::Syk, Self::Toy, Self::Ratio, Self::Spectral];

    pub fn name(self) -> &'static str {
        match self {
            Self::IsingLanczos => "ising-lanczos",
            Self::Syk => "syk",
            Self::Toy => "toy",
            Self::Ratio => "ratio",
            Self::Spectral => "spectral",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown command {s:?}")))
    }
}

/// Log-spaced frequency grid.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OmegaGrid {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub eta: Vec<Rational>,
    pub q: Vec<Rational>,
    pub j: Rational,
    /// `None` picks a depth per grid point.
    pub n_max: Option<usize>,
    pub epsilon: f64,
    pub exact: bool,
    pub precision_bits: u32,
    pub omega: OmegaGrid,
    pub out_dir: PathBuf,
    /// Reserved; nothing is random yet.
    pub seed: u64,
    pub ising: IsingParams,
    /// Points of the reference line used by toy-model detection.
    pub line_window: usize,
    pub term_budget: Option<usize>,
}

fn rationals(list: &[&str]) -> Vec<Rational> {
    list.iter().map(|s| parse_rational(s).expect("valid default")).collect()
}

impl RunConfig {
    /// Defaults for `command`.
    pub fn new(command: Command) -> Self {
        let (eta, q, n_max) = match command {
            Command::IsingLanczos => (rationals(&["0.1", "0.2", "0.3", "0.4"]), vec![], Some(20)),
            Command::Syk => (rationals(&["0.1", "0.2", "0.3", "0.5"]), rationals(&["500", "1000", "10000"]), None),
            Command::Toy => (rationals(&["1/6"]), vec![], Some(40)),
            Command::Ratio => (rationals(&["0.1"]), rationals(&["500"]), Some(24)),
            Command::Spectral => (rationals(&["1e-2", "1e-3", "1e-4"]), rationals(&["4"]), None),
        };
        Self {
            command,
            eta,
            q,
            j: Rational::from(1),
            n_max,
            epsilon: 1.0,
            exact: false,
            precision_bits: DEFAULT_PRECISION,
            omega: OmegaGrid { min: 0.5, max: 40.0, points: 300 },
            out_dir: PathBuf::from("out"),
            seed: 0,
            ising: IsingParams::default(),
            line_window: 6,
            term_budget: None,
        }
    }

    /// Set one `section.key`.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        let bad = |what: &str| Error::Config(format!("{key}: expected {what}, got {value:?}"));
        let list = |v: &str| -> Result<Vec<Rational>> {
            if v.trim().is_empty() {
                return Ok(Vec::new());
            }
            v.split(',').map(|s| parse_rational(s.trim())).collect::<Result<Vec<_>>>()
        };
        match key {
            "model.eta" => self.eta = list(value)?,
            "model.q" => self.q = list(value)?,
            "model.J" | "model.j" => self.j = parse_rational(value)?,
            "model.jxx" => self.ising.jxx = parse_rational(value)?,
            "model.hz" => self.ising.hz = parse_rational(value)?,
            "model.hx" => self.ising.hx = parse_rational(value)?,
            "run.n_max" => {
                self.n_max = if value == "auto" { None } else { Some(value.parse().map_err(|_| bad("integer or auto"))?) }
            }
            "run.epsilon" => self.epsilon = value.parse().map_err(|_| bad("number"))?,
            "run.exact" => self.exact = value.parse().map_err(|_| bad("true or false"))?,
            "run.precision_bits" => self.precision_bits = value.parse().map_err(|_| bad("integer"))?,
            "run.seed" => self.seed = value.parse().map_err(|_| bad("integer"))?,
            "run.term_budget" => {
                self.term_budget = if value == "none" { None } else { Some(value.parse().map_err(|_| bad("integer or none"))?) }
            }
            "detect.line_window" => self.line_window = value.parse().map_err(|_| bad("integer"))?,
            "omega.min" => self.omega.min = value.parse().map_err(|_| bad("number"))?,
            "omega.max" => self.omega.max = value.parse().map_err(|_| bad("number"))?,
            "omega.points" => self.omega.points = value.parse().map_err(|_| bad("integer"))?,
            "output.dir" => self.out_dir = PathBuf::from(value),
            _ => return Err(Error::Config(format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    /// Apply every line of a config file.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key=value, got {raw:?}", no + 1)))?;
            self.set(k.trim(), v)?;
        }
        self.validate()
    }

    pub fn validate(&self) -> Result<()> {
        let err = |m: String| Err(Error::Config(m));
        if self.eta.is_empty() {
            return err("model.eta is empty".into());
        }
        if self.eta.iter().any(|e| *e < 0) {
            return err("eta must be >= 0".into());
        }
        if self.j <= 0 {
            return err("J must be > 0".into());
        }
        if !(self.epsilon > 0.0) {
            return err(format!("epsilon must be > 0, got {}", self.epsilon));
        }
        if self.precision_bits < 64 {
            return err(format!("precision_bits must be >= 64, got {}", self.precision_bits));
        }
        if self.n_max == Some(0) {
            return err("n_max must be >= 1".into());
        }
        let g = self.omega;
        if !(g.min > 0.0 && g.max > g.min && g.points >= 2) {
            return err(format!("omega grid needs 0 < min < max and points >= 2, got {g:?}"));
        }
        let needs_q = matches!(self.command, Command::Syk | Command::Ratio | Command::Spectral);
        if needs_q && self.q.is_empty() {
            return err(format!("{} needs model.q", self.command));
        }
        Ok(())
    }

    /// Every setting as sorted `key=value` pairs; [`RunConfig::set`]
    /// reads them back.
    pub fn to_pairs(&self) -> Vec<(String, String)> {
        let join = |v: &[Rational]| v.iter().map(Rational::to_string).collect::<Vec<_>>().join(",");
        let mut out = vec![
            ("command".to_string(), self.command.name().to_string()),
            ("detect.line_window".into(), self.line_window.to_string()),
            ("model.J".into(), self.j.to_string()),
            ("model.eta".into(), join(&self.eta)),
            ("model.hx".into(), self.ising.hx.to_string()),
            ("model.hz".into(), self.ising.hz.to_string()),
            ("model.jxx".into(), self.ising.jxx.to_string()),
            ("model.q".into(), join(&self.q)),
            ("omega.max".into(), self.omega.max.to_string()),
            ("omega.min".into(), self.omega.min.to_string()),
            ("omega.points".into(), self.omega.points.to_string()),
            ("output.dir".into(), self.out_dir.display().to_string()),
            ("run.epsilon".into(), self.epsilon.to_string()),
            ("run.exact".into(), self.exact.to_string()),
            ("run.n_max".into(), self.n_max.map_or("auto".into(), |n| n.to_string())),
            ("run.precision_bits".into(), self.precision_bits.to_string()),
            ("run.seed".into(), self.seed.to_string()),
            ("run.term_budget".into(), self.term_budget.map_or("none".into(), |n| n.to_string())),
        ];
        out.sort();
        out
    }

    /// Rebuild from [`RunConfig::to_pairs`] output.
    pub fn from_pairs<'a, I: IntoIterator<Item = (&'a str, &'a str)>>(pairs: I) -> Result<Self> {
        let pairs: Vec<_> = pairs.into_iter().collect();
        let command = pairs
            .iter()
            .find(|(k, _)| *k == "command")
            .ok_or_else(|| Error::Config("missing command".into()))?
            .1
            .parse()?;
        let mut cfg = Self::new(command);
        for (k, v) in pairs.into_iter().filter(|(k, _)| *k != "command") {
            cfg.set(k, v)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn pairs_json(&self) -> serde_json::Value {
        serde_json::Value::Object(self.to_pairs().into_iter().map(|(k, v)| (k, serde_json::Value::String(v))).collect())
    }
}

/// File-name friendly label: decimal when it terminates, `p_over_q` otherwise.
pub fn rational_label(r: &Rational) -> String {
    let mut den = r.denom().clone();
    let mut digits = 0u32;
    for p in [2u32, 5] {
        while den.is_divisible_u(p) {
            den /= p;
        }
    }
    if den == 1 {
        let mut scaled = r.clone();
        while !scaled.denom().eq(&1) && digits < 64 {
            scaled *= 10;
            digits += 1;
        }
        let num = scaled.numer().to_string();
        if digits == 0 {
            return num;
        }
        let (sign, digs) = num.strip_prefix('-').map_or(("", num.as_str()), |d| ("-", d));
        let width = digits as usize + 1;
        let padded = format!("{digs:0>width$}");
        let (int, frac) = padded.split_at(padded.len() - digits as usize);
        return format!("{sign}{int}.{frac}");
    }
    format!("{}_over_{}", r.numer(), r.denom())
}
