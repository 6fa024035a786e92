// SPDX-License-Identifier: Apache-2.0

//! Hopping toy model: `ℒ_u|p⟩ = J|p+1⟩`, `ℒ_d|p⟩ = iηp|p⟩` on a
//! half-infinite chain, with overlaps `⟨0|p⟩ = p!` for even `p` and 0 for
//! odd `p`.
//!
//! Closed form: `μ̃_n = Σ_{k=1}^{⌊n/2⌋} S(n,2k) (iη)^{n-2k} J^{2k} (2k)!`.

use rug::{Integer, Rational};

use super::{ModelTag, MomentSequence};
use crate::error::{Error, Result};
use crate::scalar::{decimal_rational, ComplexExact, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct ToyParams {
    pub j: Rational,
    pub eta: Rational,
}

impl ToyParams {
    pub fn new(j: Rational, eta: Rational) -> Result<Self> {
        if j <= 0 {
            return Err(Error::InvalidParameter(format!("J must be > 0, got {j}")));
        }
        if eta < 0 {
            return Err(Error::InvalidParameter(format!("eta must be >= 0, got {eta}")));
        }
        Ok(Self { j, eta })
    }

    pub fn from_f64(j: f64, eta: f64) -> Result<Self> {
        Self::new(decimal_rational(j)?, decimal_rational(eta)?)
    }
}

/// Stirling numbers of the second kind, `S(n, k)`.
pub fn stirling2(n: usize, k: usize) -> Integer {
    assert!(k <= n, "stirling2 needs k <= n");
    stirling_table(n).swap_remove(n).swap_remove(k)
}

/// Rows `S(m, 0..=m)` for `m = 0..=n`.
fn stirling_table(n: usize) -> Vec<Vec<Integer>> {
    let mut t: Vec<Vec<Integer>> = Vec::with_capacity(n + 1);
    t.push(vec![Integer::from(1)]);
    for m in 1..=n {
        let prev = &t[m - 1];
        let mut row = vec![Integer::new(); m + 1];
        for (k, slot) in row.iter_mut().enumerate().skip(1) {
            let mut v = prev.get(k).map(|x| Integer::from(x * k as u32)).unwrap_or_default();
            v += &prev[k - 1];
            *slot = v;
        }
        t.push(row);
    }
    t
}

fn i_eta(eta: &Rational) -> ComplexExact {
    ComplexExact::new(Rational::new(), eta.clone())
}

/// Moments `μ̃_0..μ̃_n` from the Stirling formula.
pub fn toy_moments_formula(p: &ToyParams, n: usize) -> MomentSequence<ComplexExact> {
    let table = stirling_table(n);
    let ie = i_eta(&p.eta);
    let mut ie_pow = vec![ComplexExact::one(())];
    for m in 1..=n {
        ie_pow.push(ie_pow[m - 1].mul(&ie));
    }
    let j2 = Rational::from(p.j.square_ref());
    let mut mu = vec![ComplexExact::one(())];
    for m in 1..=n {
        let mut acc = ComplexExact::zero(());
        let mut j2k = Rational::from(1);
        let mut fact = Integer::from(1);
        for k in 1..=m / 2 {
            j2k *= &j2;
            fact *= (2 * k - 1) as u32;
            fact *= (2 * k) as u32;
            let w = Rational::from(&table[m][2 * k] * &fact) * &j2k;
            acc.add_assign(&ie_pow[m - 2 * k].mul(&ComplexExact::real(w)));
        }
        mu.push(acc);
    }
    MomentSequence::new(mu, ModelTag::Toy)
}

/// Moments from the explicit hopping process.
pub fn toy_moments_oracle(p: &ToyParams, n: usize) -> MomentSequence<ComplexExact> {
    let ie = i_eta(&p.eta);
    let j = ComplexExact::real(p.j.clone());
    let overlap = |pos: usize| -> Option<Rational> {
        (pos % 2 == 0).then(|| Rational::from(Integer::from(Integer::factorial(pos as u32))))
    };
    let mut c = vec![ComplexExact::one(())];
    let mut mu = vec![ComplexExact::one(())];
    for _ in 1..=n {
        let mut next = vec![ComplexExact::zero(()); c.len() + 1];
        for (pos, cp) in c.iter().enumerate() {
            if cp.is_zero() {
                continue;
            }
            next[pos + 1].add_assign(&j.mul(cp));
            if pos > 0 {
                let d = ie.mul(&ComplexExact::from_i64(pos as i64, ()));
                next[pos].add_assign(&d.mul(cp));
            }
        }
        c = next;
        let mut acc = ComplexExact::zero(());
        for (pos, cp) in c.iter().enumerate() {
            if let Some(o) = overlap(pos) {
                acc.add_assign(&cp.mul(&ComplexExact::real(o)));
            }
        }
        mu.push(acc);
    }
    MomentSequence::new(mu, ModelTag::Toy)
}
