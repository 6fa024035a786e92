// SPDX-License-Identifier: Apache-2.0

//! Moments of a Lindbladian on translation-invariant densities.
//!
//! `μ_{2k} = (ℒ†ᵏo|ℒᵏo)` and `μ_{2k+1} = (ℒ†ᵏo|ℒᵏ⁺¹o)`, so order `N`
//! needs only `⌈N/2⌉` applications in each direction.

use super::{ModelTag, MomentSequence};
use crate::error::{Error, Result};
use crate::lindblad::{apply_with, ApplyLimits, LindbladianSpec};
use crate::opspace::TIOperator;
use crate::scalar::Scalar;

/// Limits for [`ising_moments_with`].
#[derive(Clone, Copy, Debug, Default)]
pub struct MomentOptions {
    pub limits: ApplyLimits,
    /// Relative pruning threshold (`log2`) for big-float runs.
    pub prune_log2: Option<f64>,
}

/// Moments `μ_0..μ_n` of `o0` under `spec`.
pub fn ising_moments<S: Scalar>(spec: &LindbladianSpec, o0: &TIOperator<S>, n: usize) -> Result<MomentSequence<S>> {
    ising_moments_with(spec, o0, n, MomentOptions::default()).map(|(m, _)| m)
}

/// Like [`ising_moments`]; on a term-budget overflow returns the moments
/// computed so far with `truncated_at` set. Also reports pruned terms.
pub fn ising_moments_with<S: Scalar>(
    spec: &LindbladianSpec,
    o0: &TIOperator<S>,
    n: usize,
    opts: MomentOptions,
) -> Result<(MomentSequence<S>, usize)> {
    let mut right = o0.clone();
    let mut left = o0.clone();
    let mut mu = vec![left.inner(&right)?];
    let mut pruned = 0;
    let prune = |v: &mut TIOperator<S>| match opts.prune_log2 {
        Some(t) if !S::EXACT => v.prune_relative(t),
        _ => 0,
    };
    let mut truncated = false;
    while mu.len() <= n {
        // odd order: one more step on the right
        match apply_with(spec, &right, false, opts.limits) {
            Ok(mut r) => {
                pruned += prune(&mut r);
                right = r;
            }
            Err(Error::TermBudget { .. }) => {
                truncated = true;
                break;
            }
            Err(e) => return Err(e),
        }
        mu.push(left.inner(&right)?);
        if mu.len() > n {
            break;
        }
        match apply_with(spec, &left, true, opts.limits) {
            Ok(mut l) => {
                pruned += prune(&mut l);
                left = l;
            }
            Err(Error::TermBudget { .. }) => {
                truncated = true;
                break;
            }
            Err(e) => return Err(e),
        }
        mu.push(left.inner(&right)?);
    }
    let len = mu.len();
    let mut seq = MomentSequence::new(mu, ModelTag::Ising);
    if truncated {
        seq.truncated_at = Some(len);
    }
    Ok((seq, pruned))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lindblad::{apply, IsingParams};
    use crate::scalar::ComplexExact;

    fn x0() -> TIOperator<ComplexExact> {
        TIOperator::lattice_sum("X0".parse().unwrap(), ())
    }

    #[test]
    fn split_matches_direct_powers() {
        let spec = IsingParams::with_eta(0.1).unwrap().spec();
        let m = ising_moments(&spec, &x0(), 7).unwrap();
        let mut v = x0();
        for n in 0..=7 {
            assert_eq!(m.mu[n], x0().inner(&v).unwrap(), "n={n}");
            v = apply(&spec, &v).unwrap();
        }
    }

    #[test]
    fn basic_values_and_parity() {
        let spec = IsingParams::default().spec();
        let m = ising_moments(&spec, &x0(), 10).unwrap();
        assert_eq!(m.mu[0], ComplexExact::one(()));
        assert!(m.mu[1].is_zero());
        // b_1² = (2 hz)²
        assert_eq!(m.mu[2], ComplexExact::real(rug::Rational::from((441, 100))));
        assert!(m.parity_holds(f64::NEG_INFINITY));
        let d = ising_moments(&IsingParams::with_eta(0.3).unwrap().spec(), &x0(), 10).unwrap();
        assert!(d.parity_holds(f64::NEG_INFINITY));
        assert!(!d.mu[1].is_zero());
    }

    #[test]
    fn budget_truncates() {
        let spec = IsingParams::with_eta(0.1).unwrap().spec();
        let opts = MomentOptions { limits: ApplyLimits { term_budget: Some(20) }, prune_log2: None };
        let (m, _) = ising_moments_with(&spec, &x0(), 20, opts).unwrap();
        assert!(m.len() < 21);
        assert_eq!(m.truncated_at, Some(m.len()));
    }
}
