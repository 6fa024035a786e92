// SPDX-License-Identifier: Apache-2.0

//! Half-line cosine transform `φ(ω) = ∫₀^∞ cos(ωt) C(t) dt`.
//!
//! Analytic correlators are integrated with composite Gauss-Legendre at
//! 128 bits on uniform panels, so that values far below `f64` epsilon
//! relative to `∫|C|` (the closed-system exponential regime) stay
//! meaningful. Past the cutoff `T` the correlator is continued as
//! `C(T) e^{-κ(t-T)}` and that piece is integrated analytically.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rayon::prelude::*;
use rug::{Assign, Float, Rational};
use serde::Serialize;

use crate::bilanczos::{least_squares, r_squared};
use crate::error::{Error, Result};
use crate::moments::SykParams;

/// Correlator evaluated at arbitrary precision.
pub trait Correlator: Sync {
    /// `C(t)` for `t >= 0`, at the precision of `t`.
    fn eval(&self, t: &Float) -> Float;

    /// Asymptotic rate `κ` in `C(t) ~ e^{-κt}`, if known.
    fn decay_rate(&self) -> Option<f64> {
        None
    }
}

/// Wraps a closure as a [`Correlator`].
pub struct FnCorrelator<F>(pub F);

impl<F: Fn(&Float) -> Float + Sync> Correlator for FnCorrelator<F> {
    fn eval(&self, t: &Float) -> Float {
        (self.0)(t)
    }
}

/// Samples `C(k dt)`, `k = 0..len`.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub dt: f64,
    pub values: Vec<f64>,
    /// Data are the positive half of an even function, so `C'(0) = 0`.
    pub even: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub enum CorrelatorSpec {
    /// `1 + (2/q) ln sech(αt+β)`. Grows without bound, so `phi` refuses it.
    SykLog(SykParams),
    /// `cosh(αt+β)^{-2/q}`.
    SykResummed(SykParams),
    Tabulated(Table),
}

impl CorrelatorSpec {
    pub fn family(&self) -> &'static str {
        match self {
            Self::SykLog(_) => "syk_log",
            Self::SykResummed(_) => "syk_resummed",
            Self::Tabulated(_) => "tabulated",
        }
    }

    pub fn syk_params(&self) -> Option<&SykParams> {
        match self {
            Self::SykLog(p) | Self::SykResummed(p) => Some(p),
            Self::Tabulated(_) => None,
        }
    }
}

struct Resummed {
    alpha: Float,
    beta: Float,
    nu: Float,
    rate: f64,
}

impl Resummed {
    fn new(p: &SykParams, prec: u32) -> Self {
        let nu = Float::with_val(prec, Rational::from(2u32) / &p.q);
        Self { alpha: p.alpha_big(prec), beta: p.beta_big(prec), rate: 2.0 * p.alpha() / p.q_f64(), nu }
    }
}

impl Correlator for Resummed {
    fn eval(&self, t: &Float) -> Float {
        let prec = t.prec();
        let mut x = Float::with_val(prec, t * &self.alpha);
        x += &self.beta;
        x.cosh_mut();
        x.ln_mut();
        x *= &self.nu;
        x = -x;
        x.exp_mut();
        x
    }

    fn decay_rate(&self) -> Option<f64> {
        Some(self.rate)
    }
}

/// Quadrature settings.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadOptions {
    pub prec: u32,
    /// Gauss-Legendre points per panel.
    pub order: usize,
    pub panels_per_period: f64,
    /// Widest panel used at low frequency.
    pub max_panel: f64,
    /// Cutoff `T` satisfies `|C(T)| < decay_threshold · |C(0)|`.
    pub decay_threshold: f64,
    /// Multiplies every panel width; `0.5` halves them.
    pub width_scale: f64,
    /// Give up looking for `T` beyond this time.
    pub t_max: f64,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            prec: 128,
            order: 12,
            panels_per_period: 20.0,
            max_panel: 0.5,
            decay_threshold: 1e-16,
            width_scale: 1.0,
            t_max: 1e5,
        }
    }
}

/// Tables must fall this far below their peak to be transformed.
const TABLE_DECAY: f64 = 1e-10;

/// Gauss-Legendre nodes and weights on `[-1, 1]` by Newton iteration.
pub fn gauss_legendre(n: usize, prec: u32) -> Vec<(Float, Float)> {
    assert!(n >= 1, "need at least one node");
    let wp = prec + 32;
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let guess = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut x = Float::with_val(wp, guess);
        let mut dp = Float::new(wp);
        for it in 0.. {
            let (p, d) = legendre(n, &x);
            dp = d;
            let step = Float::with_val(wp, &p / &dp);
            x -= &step;
            if it > 200 || step.is_zero() || step.clone().abs().get_exp().unwrap_or(i32::MIN) < -(wp as i32) + 4 {
                break;
            }
        }
        let (_, d) = legendre(n, &x);
        dp.assign(&d);
        // w = 2 / ((1 - x²) P'ₙ(x)²)
        let mut w = Float::with_val(wp, 1) - Float::with_val(wp, x.square_ref());
        w *= Float::with_val(wp, dp.square_ref());
        let w = Float::with_val(wp, 2) / w;
        out.push((Float::with_val(prec, &x), Float::with_val(prec, &w)));
    }
    out.reverse();
    out
}

/// `(Pₙ(x), Pₙ'(x))`.
fn legendre(n: usize, x: &Float) -> (Float, Float) {
    let prec = x.prec();
    let mut p0 = Float::with_val(prec, 1);
    let mut p1 = x.clone();
    for k in 2..=n {
        let k = k as u32;
        let mut p2 = Float::with_val(prec, x * &p1) * (2 * k - 1);
        p2 -= Float::with_val(prec, &p0 * (k - 1));
        p2 /= k;
        p0 = std::mem::replace(&mut p1, p2);
    }
    if n == 0 {
        return (Float::with_val(prec, 1), Float::new(prec));
    }
    // P'ₙ = n (x Pₙ - Pₙ₋₁) / (x² - 1)
    let mut d = Float::with_val(prec, x * &p1) - &p0;
    d *= n as u32;
    d /= Float::with_val(prec, x.square_ref()) - 1u32;
    (p1, d)
}

/// Panel level: weighted samples on panels of width `h`.
struct Level {
    h: f64,
    panels: usize,
    /// `offsets[j]` is the node position inside a panel.
    offsets: Vec<Float>,
    /// `wc[j][p] = w_j (h/2) C(p h + offsets[j])`.
    wc: Vec<Vec<Float>>,
    /// `C` at the end of the last panel.
    c_end: Float,
    t_end: Float,
}

fn build_level<C: Correlator + ?Sized>(c: &C, h: f64, cutoff: f64, rule: &[(Float, Float)], prec: u32) -> Level {
    let panels = (cutoff / h).ceil().max(1.0) as usize;
    let hb = Float::with_val(prec, h);
    let half = Float::with_val(prec, &hb / 2u32);
    let offsets: Vec<Float> = rule
        .iter()
        .map(|(x, _)| {
            let mut o = Float::with_val(prec, x + 1u32);
            o *= &half;
            o
        })
        .collect();
    let wc = rule
        .par_iter()
        .zip(offsets.par_iter())
        .map(|((_, w), off)| {
            let scale = Float::with_val(prec, w * &half);
            (0..panels)
                .map(|p| {
                    let mut t = Float::with_val(prec, &hb * p as u32);
                    t += off;
                    let mut v = c.eval(&t);
                    v *= &scale;
                    v
                })
                .collect()
        })
        .collect();
    let t_end = Float::with_val(prec, &hb * panels as u32);
    Level { h, panels, offsets, wc, c_end: c.eval(&t_end), t_end }
}

/// Steps before the cosine rotation is reseeded exactly.
const RESEED: usize = 512;

fn level_transform(level: &Level, omega: f64, kappa: Option<f64>, prec: u32) -> Float {
    let w = Float::with_val(prec, omega);
    let delta = Float::with_val(prec, &w * level.h);
    let (sd, cd) = Float::with_val(prec, &delta).sin_cos(Float::new(prec));
    let hb = Float::with_val(prec, level.h);
    let mut acc = Float::new(prec);
    let (mut t1, mut t2, mut t3) = (Float::new(prec), Float::new(prec), Float::new(prec));
    for (off, wc) in level.offsets.iter().zip(&level.wc) {
        let (mut s, mut c) = (Float::new(prec), Float::new(prec));
        for (p, v) in wc.iter().enumerate() {
            if p % RESEED == 0 {
                let mut theta = Float::with_val(prec, &hb * p as u32);
                theta += off;
                theta *= &w;
                s.assign(&theta);
                c.assign(0);
                s.sin_cos_mut(&mut c);
            } else {
                t1.assign(&c * &cd);
                t2.assign(&s * &sd);
                t1 -= &t2;
                t3.assign(&s * &cd);
                t2.assign(&c * &sd);
                t3 += &t2;
                std::mem::swap(&mut c, &mut t1);
                std::mem::swap(&mut s, &mut t3);
            }
            t2.assign(v * &c);
            acc += &t2;
        }
    }
    if let Some(k) = kappa {
        // ∫_T^∞ cos(ωt) C(T) e^{-κ(t-T)} dt = C(T) (κ cos ωT - ω sin ωT) / (κ² + ω²)
        let theta = Float::with_val(prec, &level.t_end * &w);
        let (s, c) = theta.sin_cos(Float::new(prec));
        let mut num = Float::with_val(prec, &c * k);
        num -= Float::with_val(prec, &s * &w);
        num *= &level.c_end;
        num /= k * k + omega * omega;
        acc += num;
    }
    acc
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidParameter("empty omega grid".into()));
    }
    if grid.iter().any(|w| !w.is_finite() || *w < 0.0) {
        return Err(Error::InvalidParameter("omega grid must be finite and non-negative".into()));
    }
    if grid.windows(2).any(|p| p[1] <= p[0]) {
        return Err(Error::InvalidParameter("omega grid must be strictly increasing".into()));
    }
    Ok(())
}

fn abs_f64(x: &Float) -> f64 {
    x.to_f64().abs()
}

/// Smallest `T` (to bisection accuracy) with `|C(T)| < thr |C(0)|`.
fn find_cutoff<C: Correlator + ?Sized>(c: &C, opts: &QuadOptions) -> Result<f64> {
    let prec = opts.prec;
    let at = |t: f64| abs_f64(&c.eval(&Float::with_val(prec, t)));
    let c0 = at(0.0);
    if c0 == 0.0 || !c0.is_finite() {
        return Err(Error::InvalidParameter(format!("C(0) = {c0}")));
    }
    let thr = opts.decay_threshold * c0;
    let mut hi = 1.0;
    while at(hi) >= thr {
        hi *= 2.0;
        if hi > opts.t_max {
            return Err(Error::NonDecaying(format!("|C(t)| stays above {thr:e} up to t = {}", opts.t_max)));
        }
    }
    let mut lo = hi / 2.0;
    if at(lo) < thr {
        lo = 0.0;
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if at(mid) >= thr {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if at(2.0 * hi) >= thr {
        return Err(Error::NonDecaying(format!("|C| rises again after t = {hi}")));
    }
    Ok(hi)
}

/// Decay rate from the last stretch before `t`.
fn estimate_rate<C: Correlator + ?Sized>(c: &C, t: f64, prec: u32) -> Option<f64> {
    let d = 0.5_f64.min(t / 2.0);
    let a = c.eval(&Float::with_val(prec, t - d)).to_f64();
    let b = c.eval(&Float::with_val(prec, t)).to_f64();
    let r = a / b;
    (r.is_finite() && r > 1.0).then(|| r.ln() / d)
}

/// `φ(ω)` of an analytic correlator on `grid`.
pub fn transform<C: Correlator + ?Sized>(c: &C, grid: &[f64], opts: &QuadOptions) -> Result<Vec<f64>> {
    check_grid(grid)?;
    let prec = opts.prec;
    let cutoff = find_cutoff(c, opts)?;
    let kappa = c.decay_rate().or_else(|| estimate_rate(c, cutoff, prec));
    // levels are dyadic in max_panel; width_scale then shrinks every panel
    let h0 = opts.max_panel;
    let level_of = |w: f64| -> u32 {
        if w == 0.0 {
            return 0;
        }
        let want = 2.0 * PI / (opts.panels_per_period * w);
        let mut k = 0;
        while h0 / f64::from(1u32 << k) > want {
            k += 1;
        }
        k
    };
    let h0 = h0 * opts.width_scale.min(1.0);
    let rule = gauss_legendre(opts.order, prec);
    let mut levels = BTreeMap::new();
    for &w in grid {
        let k = level_of(w);
        levels.entry(k).or_insert_with(|| build_level(c, h0 / f64::from(1u32 << k), cutoff, &rule, prec));
    }
    debug_assert!(levels.values().all(|l| l.panels >= 1));
    Ok(grid
        .par_iter()
        .map(|&w| level_transform(&levels[&level_of(w)], w, kappa, prec).to_f64())
        .collect())
}

/// `sin(ωx)/ω`, continuous at `ω = 0`.
fn sin_over(omega: f64, x: f64) -> f64 {
    if omega == 0.0 {
        x
    } else {
        (omega * x).sin() / omega
    }
}

/// Filon transform of linearly interpolated samples.
pub fn transform_table(table: &Table, grid: &[f64]) -> Result<Vec<f64>> {
    check_grid(grid)?;
    let v = &table.values;
    if v.len() < 2 || !(table.dt > 0.0) {
        return Err(Error::InvalidParameter("table needs dt > 0 and at least two samples".into()));
    }
    let peak = v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    let last = v[v.len() - 1].abs();
    if peak == 0.0 || last > TABLE_DECAY * peak {
        return Err(Error::NonDecaying(format!("table ends at |C| = {last:e}, peak {peak:e}")));
    }
    let dt = table.dt;
    let t_end = dt * (v.len() - 1) as f64;
    Ok(grid
        .iter()
        .map(|&w| {
            // ∫ cos(ωt) f = [f sin(ωt)/ω] - Σ s_k ∫ sin(ωt)/ω, with the segment
            // integral written as dt·sinc(ω dt/2)·sin(ω m_k)/ω
            let half = 0.5 * w * dt;
            let sinc = if half == 0.0 { 1.0 } else { half.sin() / half };
            let mut acc = v[v.len() - 1] * sin_over(w, t_end);
            for k in 0..v.len() - 1 {
                let slope = (v[k + 1] - v[k]) / dt;
                let mid = dt * (k as f64 + 0.5);
                acc -= slope * dt * sinc * sin_over(w, mid);
            }
            acc
        })
        .collect())
}

/// Predicted coefficient of `ω⁻²`: `-iμ₁`.
///
/// For both SYK families this is `(2α/q) tanh β = η/q`.
pub fn tail_coefficient(spec: &CorrelatorSpec) -> f64 {
    match spec {
        CorrelatorSpec::SykLog(p) | CorrelatorSpec::SykResummed(p) => Rational::from(&p.eta / &p.q).to_f64(),
        CorrelatorSpec::Tabulated(t) => {
            if t.even || t.values.len() < 3 {
                0.0
            } else {
                let v = &t.values;
                // -C'(0), one-sided second order
                (3.0 * v[0] - 4.0 * v[1] + v[2]) / (2.0 * t.dt)
            }
        }
    }
}

/// Crossover estimate `ω* = (2J/π) ln[x (ln x)²]`, `x = 4qJ/(ηπ²)`.
pub fn crossover_formula(p: &SykParams) -> Result<f64> {
    let eta = p.eta_f64() / p.j_f64();
    if eta <= 0.0 {
        return Err(Error::Domain("crossover needs eta > 0".into()));
    }
    let x = 4.0 * p.q_f64() / (eta * PI * PI);
    if x <= 1.0 {
        return Err(Error::Domain(format!("4q/(eta pi^2) = {x} <= 1")));
    }
    let inner = x * x.ln().powi(2);
    if inner <= 1.0 {
        return Err(Error::Domain(format!("x (ln x)^2 = {inner} <= 1")));
    }
    Ok(p.j_f64() * 2.0 / PI * inner.ln())
}

/// Least-squares line over a window of the grid.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
    pub omega_lo: f64,
    pub omega_hi: f64,
}

/// Windows behind a crossover estimate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CrossoverFit {
    pub omega_star: f64,
    /// `ln φ` against `ω`.
    pub exponential: LineFit,
    /// `ln φ` against `ln ω`.
    pub power: LineFit,
}

/// Sampled spectral function.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralCurve {
    pub omega: Vec<f64>,
    pub phi: Vec<f64>,
    pub tail_coefficient: f64,
    pub fit: Option<CrossoverFit>,
    pub omega_star_formula: Option<f64>,
    /// Known exponential rate `r` in `φ ~ e^{-rω}`; `π/2J` for SYK.
    pub exponential_reference: Option<f64>,
}

pub const SPECTRAL_CSV_HEADER: [&str; 2] = ["omega", "phi"];

impl SpectralCurve {
    pub fn from_samples(omega: Vec<f64>, phi: Vec<f64>) -> Result<Self> {
        check_grid(&omega)?;
        if omega.len() != phi.len() {
            return Err(Error::InvalidParameter("omega and phi lengths differ".into()));
        }
        Ok(Self { omega, phi, tail_coefficient: 0.0, fit: None, omega_star_formula: None, exponential_reference: None })
    }

    pub fn omega_star_fit(&self) -> Option<f64> {
        self.fit.map(|f| f.omega_star)
    }

    pub fn csv_rows(&self) -> Vec<[String; 2]> {
        self.omega.iter().zip(&self.phi).map(|(w, p)| [format!("{w:.17e}"), format!("{p:.17e}")]).collect()
    }

    pub fn sidecar(&self) -> serde_json::Value {
        serde_json::json!({
            "tail_coefficient": self.tail_coefficient,
            "omega_star_fit": self.omega_star_fit(),
            "omega_star_formula": self.omega_star_formula,
            "fit_windows": self.fit,
            "exponential_reference": self.exponential_reference,
        })
    }
}

/// `φ` on `grid` with default quadrature.
pub fn phi(spec: &CorrelatorSpec, grid: &[f64]) -> Result<SpectralCurve> {
    phi_with(spec, grid, &QuadOptions::default())
}

pub fn phi_with(spec: &CorrelatorSpec, grid: &[f64], opts: &QuadOptions) -> Result<SpectralCurve> {
    let values = match spec {
        CorrelatorSpec::SykLog(_) => {
            return Err(Error::NonDecaying("syk_log grows like -(2α/q) t; use syk_resummed".into()));
        }
        CorrelatorSpec::SykResummed(p) => {
            if p.alpha() <= 0.0 {
                return Err(Error::NonDecaying("alpha must be positive".into()));
            }
            transform(&Resummed::new(p, opts.prec), grid, opts)?
        }
        CorrelatorSpec::Tabulated(t) => transform_table(t, grid)?,
    };
    let mut curve = SpectralCurve::from_samples(grid.to_vec(), values)?;
    curve.tail_coefficient = tail_coefficient(spec);
    curve.omega_star_formula = spec.syk_params().and_then(|p| crossover_formula(p).ok());
    curve.exponential_reference = spec.syk_params().map(|p| PI / (2.0 * p.j_f64()));
    curve.fit = crossover_fit(&curve).ok();
    Ok(curve)
}

/// Minimum points in a fit window.
const MIN_WINDOW: usize = 8;
/// Required fit quality.
const MIN_R2: f64 = 0.98;
/// Admissible power-law slopes.
const POWER_SLOPE: (f64, f64) = (-2.5, -1.5);

fn window_len(n: usize) -> usize {
    MIN_WINDOW.max(n / 8)
}

fn fit_line(pts: &[(f64, f64)], omega: &[f64]) -> LineFit {
    let (slope, intercept) = least_squares(pts);
    LineFit {
        slope,
        intercept,
        r2: r_squared(pts, slope, intercept),
        omega_lo: omega[0],
        omega_hi: omega[omega.len() - 1],
    }
}

/// Indices with positive, finite `φ`, as `(ω, ln φ)`.
fn log_samples(curve: &SpectralCurve) -> Vec<(f64, f64)> {
    curve
        .omega
        .iter()
        .zip(&curve.phi)
        .filter(|(w, p)| **w > 0.0 && **p > 0.0 && p.is_finite())
        .map(|(w, p)| (*w, p.ln()))
        .collect()
}

/// Best exponential window inside `pts`. Windows span a fixed stretch
/// of `ω` (and at least [`MIN_WINDOW`] points).
fn best_exponential(pts: &[(f64, f64)], span: f64) -> Option<LineFit> {
    let omega: Vec<f64> = pts.iter().map(|p| p.0).collect();
    let mut best: Option<LineFit> = None;
    for i in 0..pts.len() {
        let Some(len) = (MIN_WINDOW..=pts.len() - i).find(|&l| omega[i + l - 1] - omega[i] >= span) else {
            break;
        };
        let f = fit_line(&pts[i..i + len], &omega[i..i + len]);
        if f.slope < 0.0 && best.map_or(true, |b| f.r2 > b.r2) {
            best = Some(f);
        }
    }
    best
}

fn exp_span(omega: &[f64]) -> f64 {
    (omega[omega.len() - 1] - omega[0]) / 8.0
}

/// Fitted slope of `ln φ` against `ω` on the best window.
pub fn exponential_fit(curve: &SpectralCurve) -> Result<LineFit> {
    let pts = log_samples(curve);
    if pts.len() < MIN_WINDOW {
        return Err(Error::RegimeNotFound(format!("{} usable samples", pts.len())));
    }
    let omega: Vec<f64> = pts.iter().map(|p| p.0).collect();
    best_exponential(&pts, exp_span(&omega))
        .filter(|f| f.r2 >= MIN_R2)
        .ok_or_else(|| Error::RegimeNotFound("no exponential window".into()))
}

/// Intersection of the exponential and `ω⁻²`-like regimes.
///
/// The power window is a suffix of the grid and the exponential window
/// lies entirely below it. With [`SpectralCurve::exponential_reference`]
/// set, the exponential line is `ln φ = -rω` instead of the fitted one;
/// the window must still fit with `R² >= 0.98`.
pub fn crossover_fit(curve: &SpectralCurve) -> Result<CrossoverFit> {
    let pts = log_samples(curve);
    let width = window_len(pts.len());
    if pts.len() < 2 * width {
        return Err(Error::RegimeNotFound(format!("{} usable samples", pts.len())));
    }
    let logpts: Vec<(f64, f64)> = pts.iter().map(|(w, l)| (w.ln(), *l)).collect();
    let omega: Vec<f64> = pts.iter().map(|p| p.0).collect();
    let n = pts.len();
    let mut best: Option<(usize, LineFit)> = None;
    for start in width..=n - width {
        let f = fit_line(&logpts[start..], &omega[start..]);
        if f.slope < POWER_SLOPE.0 || f.slope > POWER_SLOPE.1 || f.r2 < MIN_R2 {
            continue;
        }
        if best.as_ref().map_or(true, |(_, b)| f.r2 > b.r2) {
            best = Some((start, f));
        }
    }
    let (start, power) = best.ok_or_else(|| Error::RegimeNotFound("no power-law tail".into()))?;
    let exponential = best_exponential(&pts[..start], exp_span(&omega))
        .filter(|f| f.r2 >= MIN_R2)
        .ok_or_else(|| Error::RegimeNotFound("no exponential window below the tail".into()))?;
    let (a, b) = match curve.exponential_reference {
        Some(r) => (0.0, -r),
        None => (exponential.intercept, exponential.slope),
    };
    // a + bω = c + d ln ω
    let gap = |w: f64| a + b * w - power.intercept - power.slope * w.ln();
    let (mut lo, mut hi) = (omega[0], omega[n - 1]);
    if gap(lo) <= 0.0 || gap(hi) >= 0.0 {
        return Err(Error::RegimeNotFound("fitted lines do not cross on the grid".into()));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if gap(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(CrossoverFit { omega_star: 0.5 * (lo + hi), exponential, power })
}

/// `n` points from `lo` to `hi`, evenly spaced in `ln ω`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi > lo && n >= 2) {
        return Err(Error::InvalidParameter(format!("log grid needs 0 < lo < hi and n >= 2, got {lo}, {hi}, {n}")));
    }
    let (a, b) = (lo.ln(), hi.ln());
    Ok((0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect())
}
