// SPDX-License-Identifier: Apache-2.0

//! Moment sequences `μ_n = (O|ℒⁿ|O)` for the three model families, and the
//! dissipative/closed moment ratio.
//!
//! With `C(t) = Σ μ_n (it)ⁿ/n!` the moments are `μ_n = i⁻ⁿ dⁿC/dtⁿ` at 0.

pub mod ising;
pub mod syk;
pub mod toy;

use crate::error::{Error, Result};
use crate::scalar::{ComplexBig, Scalar};

pub use ising::{ising_moments, ising_moments_with, MomentOptions};
pub use syk::{syk_bc_closed_form, syk_bc_closed_form_big, syk_moments, SykParams};
pub use toy::{stirling2, toy_moments_formula, toy_moments_oracle, ToyParams};

/// Convention note stored with every sequence.
pub const CONVENTION: &str = "mu_n = (1/i^n) d^n C/dt^n at t=0, C(t) = (O|exp(iLt)|O)";

/// Which model produced a sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelTag {
    Ising,
    Syk,
    Toy,
    /// Read from a file or built by hand.
    External,
}

impl ModelTag {
    pub fn as_str(self) -> &'static str {
        match self {
            ModelTag::Ising => "ising",
            ModelTag::Syk => "syk",
            ModelTag::Toy => "toy",
            ModelTag::External => "external",
        }
    }
}

/// `μ_0..μ_N` plus provenance.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentSequence<S: Scalar> {
    pub mu: Vec<S>,
    pub model: ModelTag,
    /// Set when a memory budget stopped the computation before the
    /// requested order; equals `mu.len()`.
    pub truncated_at: Option<usize>,
}

impl<S: Scalar> MomentSequence<S> {
    pub fn new(mu: Vec<S>, model: ModelTag) -> Self {
        Self { mu, model, truncated_at: None }
    }

    pub fn len(&self) -> usize {
        self.mu.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mu.is_empty()
    }

    /// Highest available order (`len - 1`).
    pub fn order(&self) -> usize {
        self.mu.len().saturating_sub(1)
    }

    /// Even moments real and odd moments imaginary, up to a relative
    /// slack `2^slack_log2` (use `-inf` for exact sequences).
    pub fn parity_holds(&self, slack_log2: f64) -> bool {
        self.mu.iter().enumerate().all(|(n, m)| {
            let stray = if n % 2 == 0 { m.im_part() } else { m.re_part() };
            if stray.is_zero() {
                return true;
            }
            stray.log2_abs() <= m.log2_abs() + slack_log2
        })
    }

    /// Rows of `moments.csv`.
    pub fn csv_rows(&self, digits: usize) -> Vec<Vec<String>> {
        self.mu
            .iter()
            .enumerate()
            .map(|(n, m)| {
                let (re, im) = m.to_decimal(digits);
                vec![n.to_string(), re, im]
            })
            .collect()
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> MomentSequence<T> {
        MomentSequence { mu: self.mu.iter().map(f).collect(), model: self.model, truncated_at: self.truncated_at }
    }
}

/// Column names of `moments.csv`.
pub const MOMENTS_CSV_HEADER: [&str; 3] = ["n", "mu_re", "mu_im"];
/// Column names of `ratio.csv`.
pub const RATIO_CSV_HEADER: [&str; 2] = ["n", "ratio"];

/// Real/imaginary part extraction used by parity checks.
trait Parts: Scalar {
    fn re_part(&self) -> Self;
    fn im_part(&self) -> Self;
}

impl<S: Scalar> Parts for S {
    fn re_part(&self) -> S {
        let mut sum = self.add(&self.conj());
        sum = sum.div(&S::from_i64(2, self.ctx())).unwrap_or_else(|| S::zero(self.ctx()));
        sum
    }

    fn im_part(&self) -> S {
        self.sub(&self.re_part())
    }
}

/// Parse `moments.csv` rows into a big-float sequence at `prec` bits.
pub fn moments_from_rows(rows: &[(usize, String, String)], prec: u32) -> Result<MomentSequence<ComplexBig>> {
    let mut mu = Vec::with_capacity(rows.len());
    for (i, (n, re, im)) in rows.iter().enumerate() {
        if *n != i {
            return Err(Error::Parse(format!("moment rows must be n = 0, 1, ...; found {n} at row {i}")));
        }
        mu.push(ComplexBig::new(crate::scalar::parse_float(re, prec)?, crate::scalar::parse_float(im, prec)?));
    }
    Ok(MomentSequence::new(mu, ModelTag::External))
}

/// `r_n = μ̃_{2n} / μ_{2n}` and derived diagnostics.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentRatio {
    pub ratio: Vec<f64>,
    pub abs: Vec<f64>,
    /// First `n` where `r_n` has the opposite sign of `r_{n-1}`.
    pub first_sign_change: Option<usize>,
}

impl MomentRatio {
    pub fn csv_rows(&self) -> Vec<Vec<String>> {
        self.ratio.iter().enumerate().map(|(n, r)| vec![n.to_string(), format!("{r:e}")]).collect()
    }
}

/// Ratio of dissipative to closed even moments.
pub fn moment_ratio<S: Scalar>(dissipative: &MomentSequence<S>, closed: &MomentSequence<S>) -> Result<MomentRatio> {
    if dissipative.model != closed.model {
        return Err(Error::InvalidParameter(format!(
            "moment ratio needs one model family, got {} and {}",
            dissipative.model.as_str(),
            closed.model.as_str()
        )));
    }
    let len = dissipative.len().min(closed.len());
    let mut ratio = Vec::new();
    for n in 0..len.div_ceil(2) {
        let r = dissipative.mu[2 * n]
            .div(&closed.mu[2 * n])
            .ok_or_else(|| Error::DivisionByZero(format!("closed moment mu_{} vanishes", 2 * n)))?;
        ratio.push(r.re_f64());
    }
    let abs = ratio.iter().map(|r| r.abs()).collect();
    let first_sign_change = (1..ratio.len()).find(|&n| (ratio[n] < 0.0) != (ratio[n - 1] < 0.0) && ratio[n] != 0.0);
    Ok(MomentRatio { ratio, abs, first_sign_change })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ComplexExact;
    use rug::Rational;

    fn ex(re: i64, im: i64) -> ComplexExact {
        ComplexExact::new(Rational::from(re), Rational::from(im))
    }

    #[test]
    fn parity_detection() {
        let good = MomentSequence::new(vec![ex(1, 0), ex(0, 3), ex(-2, 0), ex(0, -1)], ModelTag::External);
        assert!(good.parity_holds(f64::NEG_INFINITY));
        let bad = MomentSequence::new(vec![ex(1, 0), ex(1, 3)], ModelTag::External);
        assert!(!bad.parity_holds(f64::NEG_INFINITY));
    }

    #[test]
    fn ratio_of_identical_sequences_is_one() {
        let m = MomentSequence::new(vec![ex(1, 0), ex(0, 0), ex(2, 0), ex(0, 0), ex(24, 0)], ModelTag::Toy);
        let r = moment_ratio(&m, &m).unwrap();
        assert_eq!(r.ratio, vec![1.0, 1.0, 1.0]);
        assert_eq!(r.first_sign_change, None);
    }

    #[test]
    fn ratio_sign_change_and_errors() {
        let d = MomentSequence::new(vec![ex(1, 0), ex(0, 1), ex(1, 0), ex(0, 0), ex(-3, 0)], ModelTag::Toy);
        let c = MomentSequence::new(vec![ex(1, 0), ex(0, 0), ex(2, 0), ex(0, 0), ex(24, 0)], ModelTag::Toy);
        let r = moment_ratio(&d, &c).unwrap();
        assert_eq!(r.first_sign_change, Some(2));
        let z = MomentSequence::new(vec![ex(1, 0), ex(0, 0), ex(0, 0)], ModelTag::Toy);
        assert!(matches!(moment_ratio(&d, &z), Err(Error::DivisionByZero(_))));
        let other = MomentSequence::new(c.mu.clone(), ModelTag::Syk);
        assert!(moment_ratio(&d, &other).is_err());
    }

    #[test]
    fn csv_rows_round_trip() {
        let m = MomentSequence::new(vec![ComplexBig::from_f64(1.0, 0.0, 256), ComplexBig::from_f64(0.0, 0.125, 256)], ModelTag::Syk);
        let rows: Vec<(usize, String, String)> =
            m.csv_rows(77).into_iter().map(|r| (r[0].parse().unwrap(), r[1].clone(), r[2].clone())).collect();
        let back = moments_from_rows(&rows, 256).unwrap();
        assert_eq!(back.mu, m.mu);
    }
}
