// SPDX-License-Identifier: Apache-2.0

//! End-to-end experiments behind the CLI subcommands.
//!
//! Each `cmd_*` writes its files under `out_dir/<command>/` and returns a
//! [`Report`]. The model-level helpers (`ising_lanczos`, `syk_lanczos`,
//! `toy_lanczos`, ...) are public so tests and examples can reuse them
//! without touching the file system.

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rayon::prelude::*;
use rug::Rational;
use serde_json::{json, Value};

use crate::bilanczos::{
    bilanczos_monic, bilanczos_run_with, detect_np, least_squares, r_squared, DetectMode, LanczosData, LanczosOptions,
    LindbladSpace, Recurrence, LANCZOS_CSV_HEADER,
};
use crate::config::{rational_label, Command, RunConfig};
use crate::error::{Error, Result};
use crate::hankel::{
    adaptive_precision_run, from_moments_det, HankelWorkspace, LadderOptions, MomentGenerator, HANKEL_CSV_HEADER,
};
use crate::lindblad::{ApplyLimits, IsingParams};
use crate::moments::{
    ising_moments_with, moment_ratio, syk_bc_closed_form, syk_moments, toy_moments_formula, MomentOptions,
    MomentRatio, MomentSequence, SykParams, ToyParams, MOMENTS_CSV_HEADER, RATIO_CSV_HEADER,
};
use crate::opspace::{default_prune_log2, PauliString, TIOperator};
use crate::output::{Outputs, RunMeta};
use crate::scalar::{decimal_digits, ComplexBig, ComplexExact, Scalar};
use crate::spectral::{log_grid, phi, CorrelatorSpec, SpectralCurve, SPECTRAL_CSV_HEADER};

/// Digits written for Lanczos coefficients.
const COEFF_DIGITS: usize = 20;

/// Files written by a command and a JSON summary of its results.
#[derive(Debug)]
pub struct Report {
    pub files: Vec<PathBuf>,
    pub summary: Value,
}

/// `Σ_i X_i`, the initial operator of the Ising runs.
pub fn ising_o0<S: Scalar>(ctx: S::Ctx) -> TIOperator<S> {
    TIOperator::lattice_sum(PauliString::single(0, crate::opspace::Letter::X), ctx)
}

/// Big-float bi-Lanczos for the tilted-field Ising chain.
pub fn ising_lanczos(
    params: &IsingParams,
    n_max: usize,
    prec: u32,
    limits: ApplyLimits,
) -> Result<LanczosData<ComplexBig>> {
    let mut space = LindbladSpace::<ComplexBig>::new(params.spec(), prec);
    space.limits = limits;
    space.prune_log2 = Some(default_prune_log2());
    Ok(bilanczos_run_with(&space, &ising_o0(prec), n_max, LanczosOptions::default())?.0)
}

/// Exact square-root-free recursion for the Ising chain.
pub fn ising_lanczos_exact(params: &IsingParams, n_max: usize, limits: ApplyLimits) -> Result<Recurrence<ComplexExact>> {
    let mut space = LindbladSpace::<ComplexExact>::new(params.spec(), ());
    space.limits = limits;
    bilanczos_monic(&space, &ising_o0(()), n_max)
}

/// Ising `N_p`: first `n` where `b_n c_n` departs from the closed chain by
/// more than `epsilon`.
pub fn ising_np(bc: &[Complex64], closed: &[Complex64], epsilon: f64) -> Result<Option<usize>> {
    detect_np(bc, &DetectMode::Reference { closed: closed.to_vec() }, epsilon)
}

/// SYK moments at any precision.
#[derive(Clone, Debug)]
pub struct SykGenerator {
    pub params: SykParams,
}

impl MomentGenerator for SykGenerator {
    fn generate(&self, count: usize, prec: u32) -> Result<MomentSequence<ComplexBig>> {
        syk_moments(&self.params, count.saturating_sub(1), prec)
    }
}

/// Lanczos depth that reaches past the SYK deviation point
/// `N_p ≈ ln q / 2β`, with margin.
pub fn syk_depth(p: &SykParams) -> usize {
    let beta = p.beta();
    if beta <= 0.0 {
        return 20;
    }
    let est = 1.6 * p.q_f64().ln() / (2.0 * beta);
    (est.ceil() as usize + 10).clamp(20, 400)
}

/// `b_n c_n`, `n ≤ depth`, for large-q SYK through the precision ladder.
pub fn syk_lanczos(p: &SykParams, depth: usize, ladder: LadderOptions) -> Result<HankelWorkspace<ComplexBig>> {
    adaptive_precision_run(&SykGenerator { params: p.clone() }, depth, ladder)
}

pub fn syk_np(bc: &[Complex64], p: &SykParams, epsilon: f64) -> Result<Option<usize>> {
    detect_np(bc, &DetectMode::Syk { j: p.j_f64() }, epsilon)
}

/// Exact toy-model `b_n c_n` for `n ≤ depth`.
pub fn toy_lanczos(p: &ToyParams, depth: usize) -> Result<HankelWorkspace<ComplexExact>> {
    from_moments_det(&toy_moments_formula(p, 2 * depth), depth)
}

pub fn toy_np(bc: &[Complex64], window: usize, epsilon: f64) -> Result<Option<usize>> {
    detect_np(bc, &DetectMode::Line { k: window }, epsilon)
}

/// Ratio of toy moments at `eta` to the closed toy chain.
pub fn toy_ratio(p: &ToyParams, order: usize) -> Result<MomentRatio> {
    let closed = ToyParams::new(p.j.clone(), Rational::new())?;
    moment_ratio(&toy_moments_formula(p, order), &toy_moments_formula(&closed, order))
}

/// Ratio of SYK moments at `eta` to `eta = 0`, same `q`.
pub fn syk_ratio(p: &SykParams, order: usize, prec: u32) -> Result<MomentRatio> {
    let closed = p.with_eta(Rational::new())?;
    moment_ratio(&syk_moments(p, order, prec)?, &syk_moments(&closed, order, prec)?)
}

/// Ratio of Ising moments at `eta` to `eta = 0`.
pub fn ising_ratio(params: &IsingParams, order: usize, prec: u32, opts: MomentOptions) -> Result<MomentRatio> {
    let closed = params.clone().eta_rational(Rational::new())?;
    let o0 = ising_o0::<ComplexBig>(prec);
    let (dis, _) = ising_moments_with(&params.spec(), &o0, order, opts)?;
    let (cl, _) = ising_moments_with(&closed.spec(), &o0, order, opts)?;
    moment_ratio(&dis, &cl)
}

fn eta_dir(prefix: &str, eta: &Rational) -> String {
    format!("{prefix}eta_{}", rational_label(eta))
}

fn q_eta_dir(q: &Rational, eta: &Rational) -> String {
    format!("q_{}_eta_{}", rational_label(q), rational_label(eta))
}

fn syk_points(cfg: &RunConfig) -> Result<Vec<SykParams>> {
    let mut out = Vec::new();
    for q in &cfg.q {
        for eta in &cfg.eta {
            out.push(SykParams::from_rationals(q.clone(), cfg.j.clone(), eta.clone())?);
        }
    }
    Ok(out)
}

fn meta(cfg: &RunConfig, precision_bits: Option<u32>) -> RunMeta {
    RunMeta { config: cfg.pairs_json(), precision_bits }
}

fn exact_moment_rows(m: &MomentSequence<ComplexExact>) -> Vec<Vec<String>> {
    m.mu.iter().enumerate().map(|(n, x)| vec![n.to_string(), x.re.to_string(), x.im.to_string()]).collect()
}

fn finish(out: Outputs, dir: &Path, cfg: &RunConfig, summary: Value) -> Result<Report> {
    let mut out = out;
    let value = json!({ "command": cfg.command.name(), "config": cfg.pairs_json(), "summary": summary });
    out.json(&dir.join("summary.json"), &value)?;
    Ok(Report { files: out.files, summary })
}

/// Run the subcommand named in `cfg`.
pub fn run(cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    match cfg.command {
        Command::IsingLanczos => cmd_ising_lanczos(cfg),
        Command::Syk => cmd_syk(cfg),
        Command::Toy => cmd_toy(cfg),
        Command::Ratio => cmd_ratio(cfg),
        Command::Spectral => cmd_spectral(cfg),
    }
}

enum IsingRun {
    Normalized(LanczosData<ComplexBig>),
    Monic(Recurrence<ComplexExact>),
}

impl IsingRun {
    fn bc(&self) -> Vec<Complex64> {
        match self {
            Self::Normalized(d) => d.bc_c64(),
            Self::Monic(r) => r.bc.iter().map(Scalar::to_c64).collect(),
        }
    }

    fn rows(&self) -> Vec<Vec<String>> {
        match self {
            Self::Normalized(d) => d.csv_rows(COEFF_DIGITS),
            Self::Monic(r) => (0..r.bc.len())
                .map(|n| {
                    let (are, aim) = r.a[n].to_decimal(COEFF_DIGITS);
                    let (bre, bim) = r.bc[n].to_decimal(COEFF_DIGITS);
                    let s = r.bc[n].to_c64().norm().sqrt();
                    // the monic recursion has no separate b and c
                    vec![n.to_string(), are, aim, String::new(), String::new(), String::new(), bre, bim, format!("{s:e}")]
                })
                .collect(),
        }
    }

    fn breakdown(&self) -> Value {
        let b = match self {
            Self::Normalized(d) => d.breakdown,
            Self::Monic(r) => r.breakdown,
        };
        b.map_or(Value::Null, |b| json!({ "index": b.index, "kind": format!("{:?}", b.kind) }))
    }
}

fn run_ising(cfg: &RunConfig, eta: &Rational, n_max: usize) -> Result<IsingRun> {
    let params = cfg.ising.clone().eta_rational(eta.clone())?;
    let limits = ApplyLimits { term_budget: cfg.term_budget };
    if cfg.exact {
        Ok(IsingRun::Monic(ising_lanczos_exact(&params, n_max, limits)?))
    } else {
        Ok(IsingRun::Normalized(ising_lanczos(&params, n_max, cfg.precision_bits, limits)?))
    }
}

/// Bi-Lanczos on the Ising chain for every eta; `np_scaling.csv`.
pub fn cmd_ising_lanczos(cfg: &RunConfig) -> Result<Report> {
    let dir = cfg.out_dir.join(Command::IsingLanczos.name());
    let n_max = cfg.n_max.unwrap_or(20);
    let bits = (!cfg.exact).then_some(cfg.precision_bits);
    let closed = run_ising(cfg, &Rational::new(), n_max)?.bc();
    let runs: Vec<(Rational, Result<IsingRun>)> =
        cfg.eta.par_iter().map(|eta| (eta.clone(), run_ising(cfg, eta, n_max))).collect();
    let mut out = Outputs::default();
    let mut np_rows = Vec::new();
    let mut points = Vec::new();
    for (eta, run) in runs {
        let run = run?;
        let np = ising_np(&run.bc(), &closed, cfg.epsilon)?;
        let extra = json!({
            "eta": eta.to_string(),
            "n_p": np,
            "breakdown": run.breakdown(),
            "pruned_terms": match &run { IsingRun::Normalized(d) => d.pruned, IsingRun::Monic(_) => 0 },
            "normalization": if cfg.exact { "monic" } else { "normalized" },
        });
        let path = dir.join(eta_dir("", &eta)).join("lanczos.csv");
        out.csv(&path, &LANCZOS_CSV_HEADER, &run.rows(), &meta(cfg, bits), extra)?;
        let eta_f = eta.to_f64();
        let np_cell = np.map_or(String::new(), |n| n.to_string());
        let prod = np.map_or(String::new(), |n| format!("{:e}", n as f64 * eta_f));
        np_rows.push(vec![eta.to_string(), np_cell, prod]);
        points.push(json!({ "eta": eta.to_string(), "n_p": np }));
    }
    let path = dir.join("np_scaling.csv");
    out.csv(&path, &["eta", "n_p", "n_p_times_eta"], &np_rows, &meta(cfg, bits), json!({ "epsilon": cfg.epsilon }))?;
    finish(out, &dir, cfg, json!({ "points": points }))
}

struct SykPoint {
    params: SykParams,
    depth: usize,
    ws: Result<HankelWorkspace<ComplexBig>>,
}

/// Moments, Hankel `b_n c_n` and `N_p` over the `(q, eta)` grid.
pub fn cmd_syk(cfg: &RunConfig) -> Result<Report> {
    if cfg.exact {
        return Err(Error::Config("SYK moments involve tanh(beta); exact mode is not available".into()));
    }
    let dir = cfg.out_dir.join(Command::Syk.name());
    let ladder = LadderOptions { start_bits: cfg.precision_bits, ..LadderOptions::default() };
    let points: Vec<SykPoint> = syk_points(cfg)?
        .into_par_iter()
        .map(|params| {
            let depth = cfg.n_max.unwrap_or_else(|| syk_depth(&params));
            let ws = syk_lanczos(&params, depth, ladder);
            SykPoint { params, depth, ws }
        })
        .collect();
    let mut out = Outputs::default();
    let mut np_rows = Vec::new();
    let mut fit_pts = Vec::new();
    let mut summary = Vec::new();
    for pt in points {
        let p = &pt.params;
        let sub = dir.join(q_eta_dir(&p.q, &p.eta));
        let ws = match pt.ws {
            Ok(ws) => ws,
            Err(e) => {
                // a failed rung is reported per point, not fatal for the grid
                summary.push(json!({ "q": p.q.to_string(), "eta": p.eta.to_string(), "error": e.to_string() }));
                continue;
            }
        };
        let bits = ws.precision_bits;
        let m = meta(cfg, bits);
        let digits = decimal_digits(bits.unwrap_or(cfg.precision_bits));
        out.csv(&sub.join("moments.csv"), &MOMENTS_CSV_HEADER, &ws.moments.csv_rows(digits), &m, json!({ "model": "syk" }))?;
        out.csv(
            &sub.join("lanczos_from_moments.csv"),
            &HANKEL_CSV_HEADER,
            &ws.csv_rows(COEFF_DIGITS),
            &m,
            json!({ "ladder": ws.ladder, "depth": pt.depth }),
        )?;
        let bc = ws.bc_c64();
        let closed_rows: Vec<Vec<String>> = (1..bc.len())
            .map(|n| {
                let cf = syk_bc_closed_form(p, n);
                vec![n.to_string(), format!("{:e}", bc[n].re), format!("{cf:e}"), format!("{:e}", bc[n].re - cf)]
            })
            .collect();
        out.csv(
            &sub.join("closed_form.csv"),
            &["n", "bc_hankel", "bc_closed_form", "residual"],
            &closed_rows,
            &m,
            json!({}),
        )?;
        let np = syk_np(&bc, p, cfg.epsilon)?;
        let x = p.q_f64().ln() / p.eta_f64();
        let dev = np.map(|n| 2.0 * n as f64 * p.beta() - p.q_f64().ln());
        if let Some(n) = np {
            fit_pts.push((x, n as f64));
        }
        np_rows.push(vec![
            p.q.to_string(),
            p.eta.to_string(),
            format!("{x:e}"),
            np.map_or(String::new(), |n| n.to_string()),
            dev.map_or(String::new(), |d| format!("{d:e}")),
        ]);
        summary.push(json!({ "q": p.q.to_string(), "eta": p.eta.to_string(), "n_p": np, "precision_bits": bits }));
    }
    let fit = (fit_pts.len() >= 2).then(|| {
        let (s, t) = least_squares(&fit_pts);
        json!({ "slope": s, "intercept": t, "r2": r_squared(&fit_pts, s, t) })
    });
    out.csv(
        &dir.join("np_vs_logq_over_eta.csv"),
        &["q", "eta", "log_q_over_eta", "n_p", "two_np_beta_minus_ln_q"],
        &np_rows,
        &meta(cfg, Some(cfg.precision_bits)),
        json!({ "epsilon": cfg.epsilon, "fit": fit }),
    )?;
    finish(out, &dir, cfg, json!({ "points": summary, "fit": fit }))
}

/// Toy-model moments, exact `b_n c_n`, `N_p` and the moment ratio.
pub fn cmd_toy(cfg: &RunConfig) -> Result<Report> {
    let dir = cfg.out_dir.join(Command::Toy.name());
    let depth = cfg.n_max.unwrap_or(40);
    let mut out = Outputs::default();
    let mut summary = Vec::new();
    for eta in &cfg.eta {
        let p = ToyParams::new(cfg.j.clone(), eta.clone())?;
        let sub = dir.join(eta_dir("", eta));
        let ws = toy_lanczos(&p, depth)?;
        let ratio = toy_ratio(&p, 2 * depth)?;
        let np = toy_np(&ws.bc_c64(), cfg.line_window, cfg.epsilon)?;
        let crossing = ratio.first_sign_change.map(|n| 2 * n);
        let m = meta(cfg, None);
        out.csv(&sub.join("moments.csv"), &MOMENTS_CSV_HEADER, &exact_moment_rows(&ws.moments), &m, json!({ "model": "toy" }))?;
        out.csv(&sub.join("lanczos_from_moments.csv"), &HANKEL_CSV_HEADER, &ws.csv_rows(COEFF_DIGITS), &m, json!({}))?;
        let extra = json!({ "first_sign_change_n": ratio.first_sign_change, "first_sign_change_order": crossing });
        out.csv(&sub.join("ratio.csv"), &RATIO_CSV_HEADER, &ratio.csv_rows(), &m, extra)?;
        summary.push(json!({
            "eta": eta.to_string(),
            "n_p": np,
            "ratio_first_sign_change_order": crossing,
        }));
    }
    finish(out, &dir, cfg, json!({ "points": summary }))
}

/// Moment ratios for the Ising chain, SYK and the toy model side by side.
pub fn cmd_ratio(cfg: &RunConfig) -> Result<Report> {
    if cfg.exact {
        return Err(Error::Config("ratio runs in big-float arithmetic".into()));
    }
    let dir = cfg.out_dir.join(Command::Ratio.name());
    let order = cfg.n_max.unwrap_or(24);
    let prec = cfg.precision_bits;
    let m = meta(cfg, Some(prec));
    let mut out = Outputs::default();
    let mut summary = Vec::new();
    let mut emit = |out: &mut Outputs, path: PathBuf, family: &str, r: &MomentRatio, extra: Value| -> Result<()> {
        let mut extra = extra;
        extra["family"] = json!(family);
        extra["first_sign_change_n"] = json!(r.first_sign_change);
        summary.push(extra.clone());
        out.csv(&path, &RATIO_CSV_HEADER, &r.csv_rows(), &m, extra)
    };
    let opts = MomentOptions { limits: ApplyLimits { term_budget: cfg.term_budget }, prune_log2: Some(default_prune_log2()) };
    for eta in &cfg.eta {
        let params = cfg.ising.clone().eta_rational(eta.clone())?;
        let r = ising_ratio(&params, order, prec, opts)?;
        emit(&mut out, dir.join(eta_dir("ising_", eta)).join("ratio.csv"), "ising", &r, json!({ "eta": eta.to_string() }))?;
        let toy = toy_ratio(&ToyParams::new(cfg.j.clone(), eta.clone())?, order)?;
        emit(&mut out, dir.join(eta_dir("toy_", eta)).join("ratio.csv"), "toy", &toy, json!({ "eta": eta.to_string() }))?;
    }
    for p in syk_points(cfg)? {
        let r = syk_ratio(&p, order, prec)?;
        let path = dir.join(format!("syk_{}", q_eta_dir(&p.q, &p.eta))).join("ratio.csv");
        emit(&mut out, path, "syk", &r, json!({ "q": p.q.to_string(), "eta": p.eta.to_string() }))?;
    }
    finish(out, &dir, cfg, json!({ "points": summary }))
}

/// Spectral functions of the resummed SYK correlator.
pub fn cmd_spectral(cfg: &RunConfig) -> Result<Report> {
    let dir = cfg.out_dir.join(Command::Spectral.name());
    let grid = log_grid(cfg.omega.min, cfg.omega.max, cfg.omega.points)?;
    let curves: Vec<(SykParams, Result<SpectralCurve>)> = syk_points(cfg)?
        .into_par_iter()
        .map(|p| {
            let c = phi(&CorrelatorSpec::SykResummed(p.clone()), &grid);
            (p, c)
        })
        .collect();
    let mut out = Outputs::default();
    let mut summary = Vec::new();
    for (p, curve) in curves {
        let curve = curve?;
        let path = dir.join(q_eta_dir(&p.q, &p.eta)).join("spectral.csv");
        let mut extra = curve.sidecar();
        extra["q"] = json!(p.q.to_string());
        extra["eta"] = json!(p.eta.to_string());
        summary.push(extra.clone());
        out.csv(&path, &SPECTRAL_CSV_HEADER, &curve.csv_rows(), &meta(cfg, Some(128)), extra)?;
    }
    finish(out, &dir, cfg, json!({ "points": summary }))
}
