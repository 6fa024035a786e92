// SPDX-License-Identifier: Apache-2.0

//! Large-q dissipative SYK: `C(t) = 1 + (2/q) ln sech(αt + β)` with
//! `β = asinh(η/2J)` and `α = J cosh β`.
//!
//! Derivatives come from the Taylor series of `y(s) = tanh(β + s)`, which
//! obeys `y' = 1 - y²`: `(k+1) y_{k+1} = δ_{k0} - Σ_j y_j y_{k-j}`. Since
//! `C'(t) = -(2/q) α y(αt)`, `C^{(m)}(0) = -(2/q) α^m (m-1)! y_{m-1}`.

use rug::{Float, Rational};

use super::{ModelTag, MomentSequence};
use crate::error::{Error, Result};
use crate::scalar::{decimal_rational, ComplexBig, Scalar};

/// Extra series terms beyond the requested order.
const SERIES_SLACK: usize = 4;

/// Large-q SYK parameters. `q` only enters through `2/q`.
#[derive(Clone, Debug, PartialEq)]
pub struct SykParams {
    pub q: Rational,
    pub j: Rational,
    pub eta: Rational,
}

impl SykParams {
    pub fn new(q: f64, j: f64, eta: f64) -> Result<Self> {
        Self::from_rationals(decimal_rational(q)?, decimal_rational(j)?, decimal_rational(eta)?)
    }

    pub fn from_rationals(q: Rational, j: Rational, eta: Rational) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidParameter(format!("q must be >= 2, got {q}")));
        }
        if j <= 0 {
            return Err(Error::InvalidParameter(format!("J must be > 0, got {j}")));
        }
        if eta < 0 {
            return Err(Error::InvalidParameter(format!("eta must be >= 0, got {eta}")));
        }
        let p = Self { q, j, eta };
        let (alpha, beta) = (p.alpha(), p.beta());
        let check = p.j.to_f64() * beta.cosh();
        assert!(
            (alpha - check).abs() <= 1e-12 * alpha.abs(),
            "alpha = J cosh(beta) violated: {alpha} vs {check}"
        );
        Ok(p)
    }

    pub fn q_f64(&self) -> f64 {
        self.q.to_f64()
    }

    pub fn j_f64(&self) -> f64 {
        self.j.to_f64()
    }

    pub fn eta_f64(&self) -> f64 {
        self.eta.to_f64()
    }

    /// `β = asinh(η/2J)`.
    pub fn beta(&self) -> f64 {
        (self.eta_f64() / (2.0 * self.j_f64())).asinh()
    }

    /// `α = J √((η/2J)² + 1)`.
    pub fn alpha(&self) -> f64 {
        let r = self.eta_f64() / (2.0 * self.j_f64());
        self.j_f64() * (r * r + 1.0).sqrt()
    }

    pub fn beta_big(&self, prec: u32) -> Float {
        let r = Float::with_val(prec, &self.eta / Rational::from(&self.j * 2u32));
        r.asinh()
    }

    pub fn alpha_big(&self, prec: u32) -> Float {
        let r = Float::with_val(prec, &self.eta / Rational::from(&self.j * 2u32));
        let s = Float::with_val(prec, r.square_ref()) + 1u32;
        s.sqrt() * Float::with_val(prec, &self.j)
    }

    /// Same parameters at a different dissipation.
    pub fn with_eta(&self, eta: Rational) -> Result<Self> {
        Self::from_rationals(self.q.clone(), self.j.clone(), eta)
    }
}

/// Taylor coefficients `y_0..y_{len-1}` of `tanh(β + s)`.
fn tanh_series(beta: &Float, len: usize) -> Vec<Float> {
    let prec = beta.prec();
    let mut y = Vec::with_capacity(len);
    y.push(Float::with_val(prec, beta.tanh_ref()));
    for k in 0..len.saturating_sub(1) {
        let mut s = Float::new(prec);
        for j in 0..=k {
            s += Float::with_val(prec, &y[j] * &y[k - j]);
        }
        let mut next = if k == 0 { Float::with_val(prec, 1) - s } else { -s };
        next /= (k + 1) as u32;
        y.push(next);
    }
    y
}

/// Real derivatives `C^{(m)}(0)` for `m = 0..=n`.
fn derivatives(p: &SykParams, n: usize, prec: u32) -> Vec<Float> {
    let beta = p.beta_big(prec);
    let alpha = p.alpha_big(prec);
    let y = tanh_series(&beta, n + SERIES_SLACK);
    let two_over_q = Float::with_val(prec, Rational::from(2u32) / &p.q);
    let mut out = vec![Float::with_val(prec, 1)];
    let mut alpha_pow = Float::with_val(prec, 1);
    let mut fact = Float::with_val(prec, 1);
    for m in 1..=n {
        alpha_pow *= &alpha;
        if m > 1 {
            fact *= (m - 1) as u32;
        }
        let mut d = Float::with_val(prec, &two_over_q * &alpha_pow);
        d *= &fact;
        d *= &y[m - 1];
        out.push(-d);
    }
    out
}

/// Moments `μ_0..μ_n` at `prec` bits.
///
/// The series is evaluated at two guard precisions; if they disagree in
/// the top `prec - 16` bits the result is refused.
pub fn syk_moments(p: &SykParams, n: usize, prec: u32) -> Result<MomentSequence<ComplexBig>> {
    let lo = derivatives(p, n, prec + 32);
    let hi = derivatives(p, n, prec + 96);
    let mut mu = Vec::with_capacity(n + 1);
    for (m, (a, b)) in lo.iter().zip(&hi).enumerate() {
        if !a.is_zero() || !b.is_zero() {
            let diff = Float::with_val(prec + 96, a - b);
            let scale = b.clone().abs();
            if !diff.is_zero() {
                let rel = Float::with_val(64, &diff / &scale).abs();
                if rel > Float::with_val(64, Float::i_exp(1, -(prec as i32 - 16))) {
                    return Err(Error::PrecisionInsufficient(format!(
                        "SYK moment {m} unstable at {prec} bits"
                    )));
                }
            }
        }
        // μ_m = C^{(m)} / i^m = i^{-m} C^{(m)}
        let real = ComplexBig::real(Float::with_val(prec, b));
        mu.push(real.mul_i_pow(((4 - m % 4) % 4) as u8));
    }
    Ok(MomentSequence::new(mu, ModelTag::Syk))
}

/// Closed-form `b_n c_n` to first order in `1/q`.
pub fn syk_bc_closed_form(p: &SykParams, n: usize) -> f64 {
    syk_bc_closed_form_big(p, n, 128).to_f64()
}

/// [`syk_bc_closed_form`] at `prec` bits.
pub fn syk_bc_closed_form_big(p: &SykParams, n: usize, prec: u32) -> Float {
    assert!(n >= 1, "closed form starts at n = 1");
    let j2 = Float::with_val(prec, Rational::from(p.j.square_ref()));
    let q = Float::with_val(prec, &p.q);
    if n == 1 {
        return j2 * 2u32 / q;
    }
    let beta = p.beta_big(prec);
    let nf = n as u32;
    let c1 = Float::with_val(prec, &beta * (2 * nf - 2)).cosh();
    let c2 = Float::with_val(prec, &beta * (2 * nf)).cosh();
    let mut bracket = Float::with_val(prec, c1 * nf) + c2 * (nf - 1);
    if n % 2 == 0 {
        bracket = -bracket;
    }
    let corr = (bracket + 1u32) / q;
    let lin = Float::with_val(prec, nf) * (nf - 1);
    j2 * (lin + corr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rel_diff;

    #[test]
    fn alpha_beta_identity() {
        let p = SykParams::new(1000.0, 1.0, 0.3).unwrap();
        assert!((p.alpha() - p.j_f64() * p.beta().cosh()).abs() < 1e-15);
        let a = p.alpha_big(256);
        let b = Float::with_val(256, p.beta_big(256).cosh_ref());
        assert!(Float::with_val(256, &a - &b).abs() < 1e-70);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(SykParams::new(1.0, 1.0, 0.1).is_err());
        assert!(SykParams::new(10.0, 0.0, 0.1).is_err());
        assert!(SykParams::new(10.0, 1.0, -0.1).is_err());
    }

    #[test]
    fn first_moments() {
        let p = SykParams::new(1000.0, 1.0, 0.2).unwrap();
        let m = syk_moments(&p, 4, 256).unwrap();
        assert_eq!(m.mu[0], ComplexBig::one(256));
        // μ_1 = i (2α/q) tanh β = iη/q
        assert!(m.mu[1].re.is_zero());
        assert!((m.mu[1].im_f64() - 0.2 / 1000.0).abs() < 1e-18);
        // μ_2 - μ_1² = 2J²/q + η²/q²
        let var = m.mu[2].sub(&m.mu[1].mul(&m.mu[1]));
        let want = Rational::from((2, 1000)) + Rational::from((4, 100)) / Rational::from(1_000_000);
        let want = ComplexBig::from_rational(&want, &Rational::new(), 256);
        assert!(rel_diff(&var, &want) < 1e-70);
        assert!(m.parity_holds(f64::NEG_INFINITY));
    }

    #[test]
    fn closed_system_odd_moments_vanish() {
        let p = SykParams::new(500.0, 1.0, 0.0).unwrap();
        let m = syk_moments(&p, 12, 256).unwrap();
        for n in (1..=12).step_by(2) {
            assert!(m.mu[n].is_zero(), "n={n}");
        }
    }

    #[test]
    fn matches_finite_differences() {
        // C(t) = 1 + (2/q) ln sech(αt+β); compare C'' by central differences
        let p = SykParams::new(50.0, 1.0, 0.4).unwrap();
        let m = syk_moments(&p, 3, 256).unwrap();
        let (a, b, q) = (p.alpha(), p.beta(), p.q_f64());
        let c = |t: f64| 1.0 - (2.0 / q) * (a * t + b).cosh().ln();
        let h = 1e-4;
        let d2 = (c(h) - 2.0 * c(0.0) + c(-h)) / (h * h);
        // μ_2 = -C''(0)
        assert!((m.mu[2].re_f64() + d2).abs() < 1e-7);
    }

    #[test]
    fn closed_form_examples() {
        let p = SykParams::new(1000.0, 1.0, 0.0).unwrap();
        assert!((syk_bc_closed_form(&p, 1) - 0.002).abs() < 1e-16);
        assert!((syk_bc_closed_form(&p, 2) - 1.998).abs() < 1e-13);
        let big = SykParams::new(1e12, 1.0, 0.3).unwrap();
        for n in 2..8 {
            let v = syk_bc_closed_form(&big, n);
            assert!((v - (n * (n - 1)) as f64).abs() < 1e-6);
        }
    }
}
