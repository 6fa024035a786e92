// SPDX-License-Identifier: Apache-2.0

//! Pauli strings on an infinite chain and translation-invariant operator
//! densities built from them.
//!
//! A [`PauliString`] packs up to 64 consecutive sites into two bitmasks
//! (`x`, `z`) plus the index of its lowest occupied site. A [`TIOperator`]
//! stores one anchored representative (lowest site at 0) per translation
//! orbit, sorted by key, so `Σ_i X_i` is the single term `X0`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rug::Rational;

use crate::error::{Error, Result};
use crate::scalar::{ComplexExact, Scalar};

/// Maximum number of consecutive sites a string may span.
pub const MAX_SPAN: u32 = 64;

/// Single-site Pauli letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    X,
    Y,
    Z,
}

impl Letter {
    pub fn bits(self) -> (bool, bool) {
        match self {
            Letter::X => (true, false),
            Letter::Y => (true, true),
            Letter::Z => (false, true),
        }
    }

    fn from_bits(x: bool, z: bool) -> Option<Self> {
        match (x, z) {
            (true, false) => Some(Letter::X),
            (true, true) => Some(Letter::Y),
            (false, true) => Some(Letter::Z),
            (false, false) => None,
        }
    }

    fn as_char(self) -> char {
        match self {
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
        }
    }
}

/// A power of `i`: the phase `i^k`, `k ∈ {0,1,2,3}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Phase(pub u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn exponent(self) -> u8 {
        self.0 & 3
    }

    pub fn compose(self, other: Phase) -> Phase {
        Phase((self.0 + other.0) & 3)
    }

    pub fn to_exact(self) -> ComplexExact {
        self.to_scalar(())
    }

    pub fn to_scalar<S: Scalar>(self, ctx: S::Ctx) -> S {
        S::one(ctx).mul_i_pow(self.exponent())
    }
}

/// Tensor product of Pauli letters on finitely many sites.
///
/// The encoding is normalized: either the identity `(0, 0, 0)`, or bit 0 of
/// `x | z` is set and `offset` is the lowest occupied site. Equal strings
/// therefore compare equal field by field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString {
    offset: i64,
    x: u64,
    z: u64,
}

impl PauliString {
    pub const IDENTITY: PauliString = PauliString { offset: 0, x: 0, z: 0 };

    /// Build from raw masks whose bit `k` is site `offset + k`.
    pub fn from_masks(offset: i64, x: u64, z: u64) -> Self {
        let s = x | z;
        if s == 0 {
            return Self::IDENTITY;
        }
        let t = s.trailing_zeros();
        Self { offset: offset + i64::from(t), x: x >> t, z: z >> t }
    }

    /// Anchored string from masks with site 0 at bit 0.
    pub fn anchored(x: u64, z: u64) -> Self {
        Self::from_masks(0, x, z).anchor()
    }

    pub fn single(site: i64, letter: Letter) -> Self {
        let (x, z) = letter.bits();
        Self::from_masks(site, u64::from(x), u64::from(z))
    }

    /// Build from `(site, letter)` pairs; later entries on a repeated site
    /// multiply into earlier ones up to phase, which is discarded.
    pub fn from_letters<I: IntoIterator<Item = (i64, Letter)>>(letters: I) -> Result<Self> {
        let letters: Vec<(i64, Letter)> = letters.into_iter().collect();
        let Some(lo) = letters.iter().map(|l| l.0).min() else {
            return Ok(Self::IDENTITY);
        };
        let hi = letters.iter().map(|l| l.0).max().unwrap_or(lo);
        if hi - lo >= i64::from(MAX_SPAN) {
            return Err(Error::SupportOverflow { max: MAX_SPAN });
        }
        let (mut x, mut z) = (0u64, 0u64);
        for (site, letter) in letters {
            let (bx, bz) = letter.bits();
            let k = (site - lo) as u32;
            x ^= u64::from(bx) << k;
            z ^= u64::from(bz) << k;
        }
        Ok(Self::from_masks(lo, x, z))
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    /// Lowest occupied site (0 for the identity).
    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn x_mask(&self) -> u64 {
        self.x
    }

    pub fn z_mask(&self) -> u64 {
        self.z
    }

    /// Number of sites from the lowest to the highest occupied one.
    pub fn span(&self) -> u32 {
        64 - (self.x | self.z).leading_zeros()
    }

    /// Number of non-identity letters.
    pub fn weight(&self) -> u32 {
        (self.x | self.z).count_ones()
    }

    /// Number of sites carrying X or Y.
    pub fn n_xy(&self) -> u32 {
        self.x.count_ones()
    }

    /// Translate so the lowest occupied site is 0.
    pub fn anchor(self) -> Self {
        Self { offset: 0, ..self }
    }

    pub fn is_anchored(&self) -> bool {
        self.offset == 0
    }

    pub fn translate(self, r: i64) -> Self {
        if self.is_identity() {
            return self;
        }
        Self { offset: self.offset + r, ..self }
    }

    pub fn letter_at(&self, site: i64) -> Option<Letter> {
        let k = site - self.offset;
        if !(0..64).contains(&k) {
            return None;
        }
        Letter::from_bits((self.x >> k) & 1 == 1, (self.z >> k) & 1 == 1)
    }

    pub fn letters(&self) -> Vec<(i64, Letter)> {
        (0..self.span())
            .filter_map(|k| {
                let site = self.offset + i64::from(k);
                self.letter_at(site).map(|l| (site, l))
            })
            .collect()
    }

    /// True when the two strings anticommute.
    pub fn anticommutes(&self, other: &Self) -> bool {
        if self.is_identity() || other.is_identity() {
            return false;
        }
        let (lo, hi) = if self.offset <= other.offset { (self, other) } else { (other, self) };
        let d = hi.offset - lo.offset;
        if d >= i64::from(lo.span()) {
            return false;
        }
        // bits of `hi` pushed past 64 cannot overlap `lo`
        let (hx, hz) = (hi.x << d, hi.z << d);
        ((lo.x & hz) ^ (lo.z & hx)).count_ones() % 2 == 1
    }
}

/// Phase exponent of the product of two aligned strings: `PQ = i^k R`.
#[inline]
pub(crate) fn product_phase(px: u64, pz: u64, qx: u64, qz: u64) -> u8 {
    let (p_x, p_y, p_z) = (px & !pz, px & pz, pz & !px);
    let (q_x, q_y, q_z) = (qx & !qz, qx & qz, qz & !qx);
    let plus = ((p_x & q_y) | (p_y & q_z) | (p_z & q_x)).count_ones();
    let minus = ((p_y & q_x) | (p_z & q_y) | (p_x & q_z)).count_ones();
    ((plus + 3 * minus) & 3) as u8
}

/// Product `p·q = phase·r` of two Pauli strings, or `None` if the product
/// spans more than [`MAX_SPAN`] sites.
pub fn checked_mul(p: &PauliString, q: &PauliString) -> Option<(Phase, PauliString)> {
    if p.is_identity() {
        return Some((Phase::ONE, *q));
    }
    if q.is_identity() {
        return Some((Phase::ONE, *p));
    }
    let base = p.offset.min(q.offset);
    let dp = p.offset - base;
    let dq = q.offset - base;
    let top = (dp + i64::from(p.span())).max(dq + i64::from(q.span()));
    if top > i64::from(MAX_SPAN) {
        return None;
    }
    let (px, pz) = (p.x << dp, p.z << dp);
    let (qx, qz) = (q.x << dq, q.z << dq);
    let k = product_phase(px, pz, qx, qz);
    Some((Phase(k), PauliString::from_masks(base, px ^ qx, pz ^ qz)))
}

/// Product `p·q = phase·r`.
///
/// # Panics
/// If the product spans more than [`MAX_SPAN`] sites; use [`checked_mul`]
/// when that can happen.
pub fn mul(p: &PauliString, q: &PauliString) -> (Phase, PauliString) {
    checked_mul(p, q).expect("Pauli product exceeds the 64-site span limit")
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return f.write_str("I");
        }
        let mut first = true;
        for (site, letter) in self.letters() {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "{}{}", letter.as_char(), site)?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "I" {
            return Ok(Self::IDENTITY);
        }
        let mut letters = Vec::new();
        let mut seen = std::collections::BTreeSet::new();
        for tok in s.split_whitespace() {
            let mut chars = tok.chars();
            let letter = match chars.next() {
                Some('X') => Letter::X,
                Some('Y') => Letter::Y,
                Some('Z') => Letter::Z,
                _ => return Err(Error::Parse(format!("bad Pauli token {tok:?}"))),
            };
            let site: i64 = chars
                .as_str()
                .trim_start_matches('@')
                .parse()
                .map_err(|_| Error::Parse(format!("bad site in Pauli token {tok:?}")))?;
            if !seen.insert(site) {
                return Err(Error::Parse(format!("site {site} repeated in {s:?}")));
            }
            letters.push((site, letter));
        }
        Self::from_letters(letters)
    }
}

// ---------------------------------------------------------------------------

/// Translation-invariant operator density `Σ_i T_i(o)`.
///
/// Terms are `(anchored string, coefficient)` pairs, sorted by string, with
/// no zero coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct TIOperator<S: Scalar> {
    ctx: S::Ctx,
    terms: Vec<(PauliString, S)>,
}

impl<S: Scalar> TIOperator<S> {
    pub fn zero(ctx: S::Ctx) -> Self {
        Self { ctx, terms: Vec::new() }
    }

    /// `Σ_i T_i(p)` with unit coefficient.
    pub fn lattice_sum(p: PauliString, ctx: S::Ctx) -> Self {
        Self { ctx, terms: vec![(p.anchor(), S::one(ctx))] }
    }

    /// Canonicalize arbitrary terms: anchor, merge equal keys in input
    /// order, drop zeros.
    pub fn from_terms<I: IntoIterator<Item = (PauliString, S)>>(ctx: S::Ctx, terms: I) -> Result<Self> {
        let mut v: Vec<(PauliString, S)> = Vec::new();
        for (p, c) in terms {
            if c.ctx() != ctx {
                return Err(Error::PrecisionMismatch { left: S::describe_ctx(ctx), right: S::describe_ctx(c.ctx()) });
            }
            v.push((p.anchor(), c));
        }
        Ok(Self::from_unsorted(ctx, v))
    }

    /// Same as [`from_terms`](Self::from_terms) for keys that are already
    /// anchored and coefficients known to share `ctx`.
    pub(crate) fn from_unsorted(ctx: S::Ctx, mut v: Vec<(PauliString, S)>) -> Self {
        v.sort_by_key(|a| a.0);
        let mut terms: Vec<(PauliString, S)> = Vec::with_capacity(v.len());
        for (p, c) in v {
            match terms.last_mut() {
                Some((q, acc)) if *q == p => acc.add_assign(&c),
                _ => terms.push((p, c)),
            }
        }
        terms.retain(|(_, c)| !c.is_zero());
        Self { ctx, terms }
    }

    /// Wrap terms that are already sorted, merged, anchored and nonzero.
    pub(crate) fn from_sorted_unchecked(ctx: S::Ctx, terms: Vec<(PauliString, S)>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(terms.iter().all(|(p, c)| p.is_anchored() && !c.is_zero()));
        Self { ctx, terms }
    }

    pub fn ctx(&self) -> S::Ctx {
        self.ctx
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(PauliString, S)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(PauliString, S)> {
        self.terms
    }

    pub fn coefficient(&self, p: &PauliString) -> Option<&S> {
        let key = p.anchor();
        self.terms.binary_search_by(|t| t.0.cmp(&key)).ok().map(|i| &self.terms[i].1)
    }

    /// Largest span among the stored strings.
    pub fn max_span(&self) -> u32 {
        self.terms.iter().map(|t| t.0.span()).max().unwrap_or(0)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.ctx == other.ctx {
            Ok(())
        } else {
            Err(Error::PrecisionMismatch { left: S::describe_ctx(self.ctx), right: S::describe_ctx(other.ctx) })
        }
    }

    /// Per-site density inner product `(self|other)`, conjugate-linear in
    /// `self`.
    pub fn inner(&self, other: &Self) -> Result<S> {
        self.check(other)?;
        let mut acc = S::zero(self.ctx);
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => {
                    acc.add_assign(&a[i].1.conj().mul(&b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        Ok(acc)
    }

    /// `(self|self)`.
    pub fn norm_sqr(&self) -> S {
        let mut acc = S::zero(self.ctx);
        for (_, c) in &self.terms {
            acc.add_assign(&c.norm_sqr());
        }
        acc
    }

    /// `self + s·b`.
    pub fn add_scaled(&self, s: &S, b: &Self) -> Result<Self> {
        self.check(b)?;
        if s.ctx() != self.ctx {
            return Err(Error::PrecisionMismatch { left: S::describe_ctx(self.ctx), right: S::describe_ctx(s.ctx()) });
        }
        if s.is_zero() {
            return Ok(self.clone());
        }
        let (a, b) = (&self.terms, &b.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let ord = match (a.get(i), b.get(j)) {
                (Some(x), Some(y)) => x.0.cmp(&y.0),
                (Some(_), None) => Ordering::Less,
                _ => Ordering::Greater,
            };
            match ord {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((b[j].0, s.mul(&b[j].1)));
                    j += 1;
                }
                Ordering::Equal => {
                    let mut c = a[i].1.clone();
                    c.add_assign(&s.mul(&b[j].1));
                    if !c.is_zero() {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Ok(Self { ctx: self.ctx, terms: out })
    }

    /// `s·self`.
    pub fn scale(&self, s: &S) -> Self {
        if s.is_zero() {
            return Self::zero(self.ctx);
        }
        let terms = self
            .terms
            .iter()
            .map(|(p, c)| (*p, s.mul(c)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        Self { ctx: self.ctx, terms }
    }

    /// Drop terms with `|c| < 2^rel_log2 · max|c|`; returns how many went.
    pub fn prune_relative(&mut self, rel_log2: f64) -> usize {
        let max = self.terms.iter().map(|t| t.1.log2_abs()).fold(f64::NEG_INFINITY, f64::max);
        if max == f64::NEG_INFINITY {
            return 0;
        }
        let cut = max + rel_log2;
        let before = self.terms.len();
        self.terms.retain(|t| t.1.log2_abs() >= cut);
        before - self.terms.len()
    }

    /// Convert every coefficient with `f`.
    pub fn map_scalars<T: Scalar>(&self, ctx: T::Ctx, f: impl Fn(&S) -> T) -> TIOperator<T> {
        let terms = self.terms.iter().map(|(p, c)| (*p, f(c))).filter(|(_, c)| !c.is_zero()).collect();
        TIOperator { ctx, terms }
    }
}

/// Relative pruning threshold (`10^-30`) for big-float runs, as `log2`.
pub fn default_prune_log2() -> f64 {
    -30.0 * std::f64::consts::LOG2_10
}

/// Exact coefficient helper: `Σ_i T_i(p)` scaled by rational `r`.
pub fn exact_term(p: PauliString, r: Rational) -> (PauliString, ComplexExact) {
    (p.anchor(), ComplexExact::real(r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ComplexBig;
    use proptest::prelude::*;

    fn ps(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn single_site_products() {
        assert_eq!(mul(&ps("X0"), &ps("Y0")), (Phase::I, ps("Z0")));
        assert_eq!(mul(&ps("Y0"), &ps("X0")), (Phase::MINUS_I, ps("Z0")));
        assert_eq!(mul(&ps("Y0"), &ps("Z0")), (Phase::I, ps("X0")));
        assert_eq!(mul(&ps("Z0"), &ps("X0")), (Phase::I, ps("Y0")));
        assert_eq!(mul(&ps("Z0"), &ps("X0 X1")), (Phase::I, ps("Y0 X1")));
        assert_eq!(mul(&ps("X0"), &ps("X0")), (Phase::ONE, PauliString::IDENTITY));
        assert_eq!(mul(&ps("X0"), &ps("Z5")), (Phase::ONE, ps("X0 Z5")));
    }

    #[test]
    fn text_round_trip() {
        for s in ["I", "X0", "X0 Y2", "Z-3 X4", "Y1 Y2 Z3"] {
            assert_eq!(ps(s).to_string(), s);
        }
        assert_eq!(ps("X@0 X@1"), ps("X0 X1"));
        assert_eq!(ps("Y2 X0"), ps("X0 Y2"));
        assert!("Q0".parse::<PauliString>().is_err());
        assert!("X0 X0".parse::<PauliString>().is_err());
        assert!("X0 Z64".parse::<PauliString>().is_err());
    }

    #[test]
    fn anticommutation_matches_products() {
        let a = ps("X0 X1");
        let b = ps("Z0");
        assert!(a.anticommutes(&b));
        let (pab, r1) = mul(&a, &b);
        let (pba, r2) = mul(&b, &a);
        assert_eq!(r1, r2);
        assert_eq!(pab.compose(Phase::MINUS_ONE), pba);
        assert!(!ps("X0").anticommutes(&ps("X0 X1")));
        assert!(!ps("X0").anticommutes(&ps("Z3")));
    }

    #[test]
    fn inner_product_examples() {
        let x = TIOperator::<ComplexExact>::lattice_sum(ps("X0"), ());
        let z = TIOperator::<ComplexExact>::lattice_sum(ps("Z0"), ());
        let xx = TIOperator::<ComplexExact>::lattice_sum(ps("X4 X5"), ());
        assert_eq!(x.inner(&x).unwrap(), ComplexExact::one(()));
        assert_eq!(x.inner(&z).unwrap(), ComplexExact::zero(()));
        assert_eq!(xx.inner(&xx).unwrap(), ComplexExact::one(()));
    }

    #[test]
    fn add_scaled_examples() {
        let x = TIOperator::<ComplexExact>::lattice_sum(ps("X0"), ());
        let z = TIOperator::<ComplexExact>::lattice_sum(ps("Z0"), ());
        assert_eq!(x.add_scaled(&ComplexExact::zero(()), &z).unwrap(), x);
        assert!(x.add_scaled(&ComplexExact::from_i64(-1, ()), &x).unwrap().is_empty());
        assert_eq!(x.add_scaled(&ComplexExact::one(()), &z).unwrap().len(), 2);
    }

    #[test]
    fn from_terms_merges_translates() {
        let op = TIOperator::<ComplexExact>::from_terms(
            (),
            [
                (ps("X3"), ComplexExact::one(())),
                (ps("X-2"), ComplexExact::one(())),
                (ps("Z1 Z2"), ComplexExact::from_i64(2, ())),
                (ps("Z0 Z1"), ComplexExact::from_i64(-2, ())),
            ],
        )
        .unwrap();
        assert_eq!(op.len(), 1);
        assert_eq!(op.coefficient(&ps("X7")).unwrap(), &ComplexExact::from_i64(2, ()));
    }

    #[test]
    fn precision_mismatch_in_inner() {
        let a = TIOperator::<ComplexBig>::lattice_sum(ps("X0"), 128);
        let b = TIOperator::<ComplexBig>::lattice_sum(ps("X0"), 256);
        assert!(matches!(a.inner(&b), Err(Error::PrecisionMismatch { .. })));
    }

    #[test]
    fn pruning_is_relative() {
        let mut op = TIOperator::<ComplexBig>::from_terms(
            256,
            [
                (ps("X0"), ComplexBig::from_f64(1.0, 0.0, 256)),
                (ps("Z0"), ComplexBig::from_f64(1e-31, 0.0, 256)),
                (ps("Y0"), ComplexBig::from_f64(0.0, 1e-29, 256)),
            ],
        )
        .unwrap();
        assert_eq!(op.prune_relative(default_prune_log2()), 1);
        assert_eq!(op.len(), 2);
    }

    fn arb_string() -> impl Strategy<Value = PauliString> {
        (-3i64..3, 0u64..64, 0u64..64).prop_map(|(o, x, z)| PauliString::from_masks(o, x, z))
    }

    fn arb_op() -> impl Strategy<Value = TIOperator<ComplexExact>> {
        prop::collection::vec((0u64..32, 0u64..32, -5i64..5, -5i64..5), 0..8).prop_map(|v| {
            TIOperator::from_terms(
                (),
                v.into_iter().map(|(x, z, re, im)| {
                    (PauliString::anchored(x, z), ComplexExact::new(Rational::from(re), Rational::from(im)))
                }),
            )
            .unwrap()
        })
    }

    proptest! {
        #[test]
        fn mul_is_associative_with_consistent_phase(p in arb_string(), q in arb_string(), r in arb_string()) {
            let (a1, pq) = mul(&p, &q);
            let (a2, left) = mul(&pq, &r);
            let (b1, qr) = mul(&q, &r);
            let (b2, right) = mul(&p, &qr);
            prop_assert_eq!(left, right);
            prop_assert_eq!(a1.compose(a2), b1.compose(b2));
        }

        #[test]
        fn canonicalization_is_idempotent(p in arb_string()) {
            let a = p.anchor();
            prop_assert_eq!(a.anchor(), a);
            prop_assert_eq!(a.to_string().parse::<PauliString>().unwrap(), a);
            prop_assert_eq!(p.to_string().parse::<PauliString>().unwrap(), p);
        }

        #[test]
        fn inner_is_hermitian_and_cauchy_schwarz(a in arb_op(), b in arb_op()) {
            let ab = a.inner(&b).unwrap();
            let ba = b.inner(&a).unwrap();
            prop_assert_eq!(ab.clone(), ba.conj());
            let aa = a.inner(&a).unwrap();
            let bb = b.inner(&b).unwrap();
            prop_assert!(aa.im.cmp0() == Ordering::Equal && aa.re.cmp0() != Ordering::Less);
            let lhs = ab.norm_sqr().re;
            let rhs = Rational::from(&aa.re * &bb.re);
            prop_assert!(lhs <= rhs);
        }

        #[test]
        fn add_scaled_bounds_term_count(a in arb_op(), b in arb_op(), re in -3i64..3) {
            let s = ComplexExact::from_i64(re, ());
            let c = a.add_scaled(&s, &b).unwrap();
            prop_assert!(c.len() <= a.len() + b.len());
            prop_assert!(c.terms().iter().all(|(p, v)| p.is_anchored() && !v.is_zero()));
        }
    }
}
