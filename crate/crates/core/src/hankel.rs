// SPDX-License-Identifier: Apache-2.0

//! Moments to Lanczos products.
//!
//! With Hankel determinants `K_n = det[μ_{i+j}]_{i,j=0..n}` and
//! `K_{-1} = 1`, `b_n c_n = K_n K_{n-2} / K_{n-1}²`. The same numbers come
//! out of the classical moment-to-recurrence (Chebyshev) table, which also
//! yields the diagonal `a_n`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::moments::MomentSequence;
use crate::scalar::{rel_diff, ComplexBig, ComplexExact, Scalar, DEFAULT_PRECISION};

/// Determinants and products for one moment sequence.
#[derive(Clone, Debug, PartialEq)]
pub struct HankelWorkspace<S: Scalar> {
    pub moments: MomentSequence<S>,
    /// `k[0] = K_{-1}`, `k[n + 1] = K_n`.
    pub k: Vec<S>,
    /// `bc[0]` is a zero placeholder; `bc[n]` for `1 ≤ n ≤ N`.
    pub bc: Vec<S>,
    /// Working precision in bits, `None` for exact runs.
    pub precision_bits: Option<u32>,
    /// Precisions tried by the adaptive ladder, in order.
    pub ladder: Vec<u32>,
}

impl<S: Scalar> HankelWorkspace<S> {
    /// `K_n` for `n ≥ -1`.
    pub fn k_at(&self, n: isize) -> &S {
        &self.k[(n + 1) as usize]
    }

    pub fn bc_c64(&self) -> Vec<Complex64> {
        self.bc.iter().map(Scalar::to_c64).collect()
    }

    /// Rows of `lanczos_from_moments.csv`.
    pub fn csv_rows(&self, digits: usize) -> Vec<Vec<String>> {
        let bits = self.precision_bits.map(|b| b.to_string()).unwrap_or_else(|| "exact".into());
        (1..self.bc.len())
            .map(|n| {
                let (re, im) = self.bc[n].to_decimal(digits);
                let s = self.bc[n].to_c64().norm().sqrt();
                vec![n.to_string(), re, im, format!("{s:e}"), bits.clone()]
            })
            .collect()
    }
}

/// Column names of `lanczos_from_moments.csv`.
pub const HANKEL_CSV_HEADER: [&str; 5] = ["n", "bc_re", "bc_im", "sqrt_bc_abs", "precision_bits"];

fn need(m: &[impl Scalar], n: usize) -> Result<()> {
    let needed = 2 * n + 1;
    if m.len() < needed {
        return Err(Error::TooFewMoments { needed, have: m.len() });
    }
    Ok(())
}

/// Working precision of a scalar, `None` when exact.
pub trait PrecisionOf: Scalar {
    fn precision_bits(&self) -> Option<u32>;
}

impl PrecisionOf for ComplexExact {
    fn precision_bits(&self) -> Option<u32> {
        None
    }
}

impl PrecisionOf for ComplexBig {
    fn precision_bits(&self) -> Option<u32> {
        Some(self.prec())
    }
}

/// Numerical zero test: exact zero, or for floats a value that kept
/// fewer than half of its bits after cancelling against terms of size
/// `2^scale_log2`.
fn cancelled<S: PrecisionOf>(x: &S, scale_log2: f64) -> bool {
    if x.is_zero() {
        return true;
    }
    match x.precision_bits() {
        None => false,
        Some(p) => x.log2_abs() <= scale_log2 - f64::from(p) / 2.0,
    }
}

fn products<S: PrecisionOf>(moments: &MomentSequence<S>, n: usize, k: Vec<S>) -> Result<HankelWorkspace<S>> {
    let ctx = moments.mu[0].ctx();
    let mut bc = vec![S::zero(ctx)];
    for i in 1..=n {
        // K_i K_{i-2} / K_{i-1}²
        let num = k[i + 1].mul(&k[i - 1]);
        let den = k[i].mul(&k[i]);
        bc.push(num.div(&den).ok_or(Error::MomentDegeneracy { index: i - 1 })?);
    }
    Ok(HankelWorkspace {
        precision_bits: moments.mu[0].precision_bits(),
        moments: moments.clone(),
        k,
        bc,
        ladder: Vec::new(),
    })
}

/// Leading Hankel minors of an exact sequence by one fraction-free
/// (Bareiss) elimination; the pivots are the leading principal minors.
fn leading_minors_bareiss(mu: &[ComplexExact], n: usize) -> Result<Vec<ComplexExact>> {
    let size = n + 1;
    let mut a: Vec<Vec<ComplexExact>> = (0..size).map(|i| (0..size).map(|j| mu[i + j].clone()).collect()).collect();
    let mut k = vec![ComplexExact::one(())];
    let mut prev = ComplexExact::one(());
    for s in 0..size {
        let pivot = a[s][s].clone();
        k.push(pivot.clone());
        if pivot.is_zero() {
            return Err(Error::MomentDegeneracy { index: s });
        }
        for i in (s + 1)..size {
            for j in (s + 1)..size {
                let v = pivot.mul(&a[i][j]).sub(&a[i][s].mul(&a[s][j]));
                a[i][j] = v.div(&prev).expect("previous Bareiss pivot is nonzero");
            }
        }
        prev = pivot;
    }
    Ok(k)
}

/// Leading Hankel minors of a float sequence by one unpivoted
/// elimination: pivot `s` equals `K_s / K_{s-1}`. Fixed elimination order
/// keeps the minors leading; precision absorbs the missing pivoting.
fn leading_minors_float(mu: &[ComplexBig], n: usize) -> Result<Vec<ComplexBig>> {
    use rayon::prelude::*;
    let size = n + 1;
    let prec = mu[0].prec();
    let mut a: Vec<Vec<ComplexBig>> = (0..size).map(|i| (0..size).map(|j| mu[i + j].clone()).collect()).collect();
    // largest magnitude seen by each diagonal entry, for the cancellation test
    let mut scale: Vec<f64> = (0..size).map(|i| a[i][i].log2_abs()).collect();
    let mut k = vec![ComplexBig::one(prec)];
    let mut det = ComplexBig::one(prec);
    for s in 0..size {
        let pivot = a[s][s].clone();
        if cancelled(&pivot, scale[s]) {
            return Err(Error::MomentDegeneracy { index: s });
        }
        det = det.mul(&pivot);
        k.push(det.clone());
        let inv = ComplexBig::one(prec).div(&pivot).expect("pivot is nonzero");
        let (top, rest) = a.split_at_mut(s + 1);
        let row = &top[s];
        let seen: Vec<f64> = rest
            .par_iter_mut()
            .enumerate()
            .map(|(off, r)| {
                let i = s + 1 + off;
                let f = r[s].mul(&inv);
                let mut seen = f64::NEG_INFINITY;
                if f.is_zero() {
                    return seen;
                }
                for j in (s + 1)..size {
                    let t = f.mul(&row[j]);
                    if j == i {
                        seen = t.log2_abs();
                    }
                    r[j].sub_assign(&t);
                }
                seen
            })
            .collect();
        for (off, v) in seen.into_iter().enumerate() {
            let d = &mut scale[s + 1 + off];
            *d = d.max(v);
        }
    }
    Ok(k)
}

/// Scalars with a determinant strategy.
pub trait HankelScalar: PrecisionOf {
    fn leading_minors(mu: &[Self], n: usize) -> Result<Vec<Self>>;
}

impl HankelScalar for ComplexExact {
    fn leading_minors(mu: &[Self], n: usize) -> Result<Vec<Self>> {
        leading_minors_bareiss(mu, n)
    }
}

impl HankelScalar for ComplexBig {
    fn leading_minors(mu: &[Self], n: usize) -> Result<Vec<Self>> {
        leading_minors_float(mu, n)
    }
}

/// `b_n c_n` for `1 ≤ n ≤ N` from Hankel determinants.
///
/// Needs `μ_0..μ_{2N}`. A vanishing `K_n` (the moments describe a measure
/// on at most `n` points) is reported as a degeneracy at index `n`.
pub fn from_moments_det<S: HankelScalar>(m: &MomentSequence<S>, n: usize) -> Result<HankelWorkspace<S>> {
    need(&m.mu, n)?;
    let k = S::leading_minors(&m.mu, n)?;
    products(m, n, k)
}

/// Output of the moment-to-recurrence table.
#[derive(Clone, Debug, PartialEq)]
pub struct RecursiveCoefficients<S: Scalar> {
    /// `bc[0]` is a zero placeholder.
    pub bc: Vec<S>,
    /// `a[k]` for every `k` with `σ_{k,k+1}` available (needs `μ_{2k+1}`).
    pub a: Vec<S>,
}

/// Chebyshev's algorithm:
/// `σ_{k,l} = σ_{k-1,l+1} - a_{k-1} σ_{k-1,l} - bc_{k-1} σ_{k-2,l}`,
/// `a_k = σ_{k,k+1}/σ_{k,k} - σ_{k-1,k}/σ_{k-1,k-1}`,
/// `bc_k = σ_{k,k}/σ_{k-1,k-1}`, with `σ_{-1,l} = 0`, `σ_{0,l} = μ_l`.
pub fn from_moments_recursive<S: HankelScalar>(m: &MomentSequence<S>, n: usize) -> Result<RecursiveCoefficients<S>> {
    need(&m.mu, n)?;
    let mu = &m.mu;
    let ctx = mu[0].ctx();
    let top = mu.len() - 1;
    if mu[0].is_zero() {
        return Err(Error::MomentDegeneracy { index: 0 });
    }
    let mut prev: Vec<S> = vec![S::zero(ctx); top + 1];
    let mut cur: Vec<S> = mu.clone();
    let mut a = vec![mu[1].div(&mu[0]).ok_or(Error::MomentDegeneracy { index: 0 })?];
    let mut bc = vec![S::zero(ctx)];
    for k in 1..=n {
        let mut next: Vec<S> = vec![S::zero(ctx); top + 1];
        for l in k..top.saturating_sub(k - 1) {
            let mut v = cur[l + 1].sub(&a[k - 1].mul(&cur[l]));
            if k >= 2 {
                v.sub_assign(&bc[k - 1].mul(&prev[l]));
            }
            next[l] = v;
        }
        // σ_{k,k} = K_k / K_{k-1}; zero when its inputs cancelled
        let mut scale = cur[k + 1].log2_abs().max(a[k - 1].mul(&cur[k]).log2_abs());
        if k >= 2 {
            scale = scale.max(bc[k - 1].mul(&prev[k]).log2_abs());
        }
        let degenerate = cancelled(&next[k], scale);
        if degenerate {
            return Err(Error::MomentDegeneracy { index: k });
        }
        let b = next[k].div(&cur[k - 1]).ok_or(Error::MomentDegeneracy { index: k - 1 })?;
        bc.push(b);
        if k < top - k {
            let t1 = next[k + 1].div(&next[k]).ok_or(Error::MomentDegeneracy { index: k })?;
            let t2 = cur[k].div(&cur[k - 1]).ok_or(Error::MomentDegeneracy { index: k - 1 })?;
            a.push(t1.sub(&t2));
        }
        prev = std::mem::replace(&mut cur, next);
    }
    Ok(RecursiveCoefficients { bc, a })
}

/// Source of moments at any requested precision.
pub trait MomentGenerator {
    /// Exact moments, when available; skips the ladder.
    fn exact(&self, _count: usize) -> Option<MomentSequence<ComplexExact>> {
        None
    }
    /// `μ_0..μ_{count-1}` at (at least) `prec` bits.
    fn generate(&self, count: usize, prec: u32) -> Result<MomentSequence<ComplexBig>>;
}

/// Ladder settings.
#[derive(Clone, Copy, Debug)]
pub struct LadderOptions {
    pub start_bits: u32,
    pub cap_bits: u32,
    pub target_digits: u32,
}

impl Default for LadderOptions {
    fn default() -> Self {
        Self { start_bits: DEFAULT_PRECISION, cap_bits: 1 << 20, target_digits: 10 }
    }
}

/// `bc_1..bc_N` from generated moments, doubling the precision until two
/// consecutive rungs agree to `target_digits`.
///
/// A generator that hands back less precision than requested can never
/// certify its digits, so it runs the ladder into the cap.
pub fn adaptive_precision_run<G: MomentGenerator + ?Sized>(
    generator: &G,
    n: usize,
    opts: LadderOptions,
) -> Result<HankelWorkspace<ComplexBig>> {
    let count = 2 * n + 1;
    if let Some(exact) = generator.exact(count) {
        let ws = from_moments_det(&exact, n)?;
        let prec = opts.start_bits;
        let conv = |x: &ComplexExact| ComplexBig::from_rational(&x.re, &x.im, prec);
        return Ok(HankelWorkspace {
            moments: exact.map(conv),
            k: ws.k.iter().map(conv).collect(),
            bc: ws.bc.iter().map(conv).collect(),
            precision_bits: None,
            ladder: Vec::new(),
        });
    }
    let tol = 10f64.powi(-(opts.target_digits as i32));
    let mut ladder = Vec::new();
    let mut prev: Option<HankelWorkspace<ComplexBig>> = None;
    let mut prec = opts.start_bits;
    loop {
        if prec > opts.cap_bits {
            return Err(Error::LadderCap { cap: opts.cap_bits, digits: opts.target_digits });
        }
        ladder.push(prec);
        let m = generator.generate(count, prec)?;
        let honest = m.mu.iter().all(|x| x.prec() >= prec);
        let cur = if honest { Some(from_moments_det(&m, n)?) } else { None };
        if let (Some(p), Some(c)) = (&prev, &cur) {
            let stable = (1..=n).all(|i| rel_diff(&p.bc[i], &c.bc[i]) <= tol);
            if stable {
                let mut out = cur.expect("checked above");
                out.ladder = ladder;
                return Ok(out);
            }
        }
        prev = cur;
        prec = prec.saturating_mul(2);
    }
}
