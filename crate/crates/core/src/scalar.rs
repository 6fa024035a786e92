// SPDX-License-Identifier: Apache-2.0

//! Complex scalar kinds shared by every pipeline.
//!
//! Two kinds exist: [`ComplexExact`] (Gaussian rationals, never rounded)
//! and [`ComplexBig`] (a pair of MPFR floats at a fixed precision). Code
//! that works on operators, moments or determinants is generic over
//! [`Scalar`].

use std::cmp::Ordering;
use std::fmt;

use num_complex::Complex64;
use rug::ops::NegAssign;
use rug::{Float, Rational};

use crate::error::{Error, Result};

/// Default working precision of big-float runs, in bits.
pub const DEFAULT_PRECISION: u32 = 1024;

/// Common interface of the exact and big-float complex scalars.
pub trait Scalar: Clone + Send + Sync + fmt::Debug + PartialEq + 'static {
    /// Context needed to mint new values (`()` or a precision in bits).
    type Ctx: Copy + Send + Sync + fmt::Debug + PartialEq + 'static;

    /// True when arithmetic never rounds.
    const EXACT: bool;

    fn ctx(&self) -> Self::Ctx;
    fn describe_ctx(ctx: Self::Ctx) -> String;

    fn zero(ctx: Self::Ctx) -> Self;
    fn one(ctx: Self::Ctx) -> Self {
        Self::from_i64(1, ctx)
    }
    fn from_i64(v: i64, ctx: Self::Ctx) -> Self;
    fn from_rational(re: &Rational, im: &Rational, ctx: Self::Ctx) -> Self;

    fn is_zero(&self) -> bool;

    fn add_assign(&mut self, rhs: &Self);
    fn sub_assign(&mut self, rhs: &Self);
    /// `self += i^k * rhs`.
    fn add_assign_rotated(&mut self, rhs: &Self, k: u8);
    fn mul(&self, rhs: &Self) -> Self;
    /// `None` on division by zero.
    fn div(&self, rhs: &Self) -> Option<Self>;
    fn neg(&self) -> Self;
    fn conj(&self) -> Self;
    /// `i^k * self`.
    fn mul_i_pow(&self, k: u8) -> Self {
        let mut out = Self::zero(self.ctx());
        out.add_assign_rotated(self, k);
        out
    }
    /// `|self|^2` as a real-valued scalar.
    fn norm_sqr(&self) -> Self;
    /// Principal square root. Exact scalars return `None` unless both parts
    /// are perfect rational squares of a real number.
    fn sqrt(&self) -> Option<Self>;

    fn re_f64(&self) -> f64;
    fn im_f64(&self) -> f64;
    fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re_f64(), self.im_f64())
    }
    /// `log2 |self|`, `-inf` for zero. Safe for magnitudes far outside f64.
    fn log2_abs(&self) -> f64;
    /// Decimal rendering of real and imaginary parts.
    fn to_decimal(&self, digits: usize) -> (String, String);

    fn sub(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        out.sub_assign(rhs);
        out
    }
    fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(rhs);
        out
    }
    fn same_ctx(&self, other: &Self) -> Result<()> {
        if self.ctx() == other.ctx() {
            Ok(())
        } else {
            Err(Error::PrecisionMismatch {
                left: Self::describe_ctx(self.ctx()),
                right: Self::describe_ctx(other.ctx()),
            })
        }
    }
}

/// Relative distance `|a - b| / max(|a|, |b|)` as `log2`; `-inf` if equal.
pub fn rel_diff_log2<S: Scalar>(a: &S, b: &S) -> f64 {
    let d = a.sub(b).log2_abs();
    let m = a.log2_abs().max(b.log2_abs());
    if d == f64::NEG_INFINITY {
        return d;
    }
    if m == f64::NEG_INFINITY {
        return f64::INFINITY;
    }
    d - m
}

/// Relative distance as a plain number, saturating at f64 range.
pub fn rel_diff<S: Scalar>(a: &S, b: &S) -> f64 {
    rel_diff_log2(a, b).exp2()
}

// ---------------------------------------------------------------------------

/// Gaussian rational `re + i im`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ComplexExact {
    pub re: Rational,
    pub im: Rational,
}

impl ComplexExact {
    pub fn new(re: Rational, im: Rational) -> Self {
        Self { re, im }
    }

    pub fn real(re: Rational) -> Self {
        Self { re, im: Rational::new() }
    }
}

impl fmt::Display for ComplexExact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) + ({})i", self.re, self.im)
    }
}

fn rational_log2_abs(r: &Rational) -> f64 {
    if r.cmp0() == Ordering::Equal {
        return f64::NEG_INFINITY;
    }
    float_log2_abs(&Float::with_val(64, r))
}

fn float_log2_abs(x: &Float) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let (m, e) = x.to_f64_exp();
    m.abs().log2() + f64::from(e)
}

fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.cmp0() == Ordering::Less {
        return None;
    }
    let (n, d) = (r.numer(), r.denom());
    if !n.is_perfect_square() || !d.is_perfect_square() {
        return None;
    }
    Some(Rational::from((n.clone().sqrt(), d.clone().sqrt())))
}

impl Scalar for ComplexExact {
    type Ctx = ();
    const EXACT: bool = true;

    fn ctx(&self) {}

    fn describe_ctx(_: ()) -> String {
        "exact".to_string()
    }

    fn zero(_: ()) -> Self {
        Self::default()
    }

    fn from_i64(v: i64, _: ()) -> Self {
        Self::real(Rational::from(v))
    }

    fn from_rational(re: &Rational, im: &Rational, _: ()) -> Self {
        Self::new(re.clone(), im.clone())
    }

    fn is_zero(&self) -> bool {
        self.re.cmp0() == Ordering::Equal && self.im.cmp0() == Ordering::Equal
    }

    fn add_assign(&mut self, rhs: &Self) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }

    fn sub_assign(&mut self, rhs: &Self) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }

    fn add_assign_rotated(&mut self, rhs: &Self, k: u8) {
        match k & 3 {
            0 => {
                self.re += &rhs.re;
                self.im += &rhs.im;
            }
            1 => {
                self.re -= &rhs.im;
                self.im += &rhs.re;
            }
            2 => {
                self.re -= &rhs.re;
                self.im -= &rhs.im;
            }
            _ => {
                self.re += &rhs.im;
                self.im -= &rhs.re;
            }
        }
    }

    fn mul(&self, rhs: &Self) -> Self {
        let re = Rational::from(&self.re * &rhs.re) - Rational::from(&self.im * &rhs.im);
        let im = Rational::from(&self.re * &rhs.im) + Rational::from(&self.im * &rhs.re);
        Self { re, im }
    }

    fn div(&self, rhs: &Self) -> Option<Self> {
        let den = Rational::from(rhs.re.square_ref()) + Rational::from(rhs.im.square_ref());
        if den.cmp0() == Ordering::Equal {
            return None;
        }
        let p = self.mul(&rhs.conj());
        Some(Self { re: p.re / &den, im: p.im / &den })
    }

    fn neg(&self) -> Self {
        Self { re: Rational::from(-&self.re), im: Rational::from(-&self.im) }
    }

    fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: Rational::from(-&self.im) }
    }

    fn norm_sqr(&self) -> Self {
        Self::real(Rational::from(self.re.square_ref()) + Rational::from(self.im.square_ref()))
    }

    fn sqrt(&self) -> Option<Self> {
        if self.im.cmp0() != Ordering::Equal {
            return None;
        }
        if self.re.cmp0() == Ordering::Less {
            let r = rational_sqrt(&Rational::from(-&self.re))?;
            return Some(Self::new(Rational::new(), r));
        }
        rational_sqrt(&self.re).map(Self::real)
    }

    fn re_f64(&self) -> f64 {
        self.re.to_f64()
    }

    fn im_f64(&self) -> f64 {
        self.im.to_f64()
    }

    fn log2_abs(&self) -> f64 {
        let a = rational_log2_abs(&self.re);
        let b = rational_log2_abs(&self.im);
        let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
        if hi == f64::NEG_INFINITY {
            return hi;
        }
        hi + 0.5 * (1.0 + (2.0 * (lo - hi)).exp2()).log2()
    }

    fn to_decimal(&self, digits: usize) -> (String, String) {
        let prec = ((digits as f64) * std::f64::consts::LOG2_10).ceil() as u32 + 16;
        (
            float_decimal(&Float::with_val(prec, &self.re), digits),
            float_decimal(&Float::with_val(prec, &self.im), digits),
        )
    }
}

// ---------------------------------------------------------------------------

/// Complex number with MPFR real and imaginary parts at a shared precision.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexBig {
    pub re: Float,
    pub im: Float,
}

impl ComplexBig {
    pub fn new(re: Float, im: Float) -> Self {
        debug_assert_eq!(re.prec(), im.prec());
        Self { re, im }
    }

    pub fn real(re: Float) -> Self {
        let im = Float::new(re.prec());
        Self { re, im }
    }

    pub fn from_f64(re: f64, im: f64, prec: u32) -> Self {
        Self { re: Float::with_val(prec, re), im: Float::with_val(prec, im) }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec()
    }

    /// Re-round into a new precision.
    pub fn with_prec(&self, prec: u32) -> Self {
        Self { re: Float::with_val(prec, &self.re), im: Float::with_val(prec, &self.im) }
    }

    /// Modulus as a real float.
    pub fn abs(&self) -> Float {
        Float::with_val(self.prec(), self.re.hypot_ref(&self.im))
    }
}

impl fmt::Display for ComplexBig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.to_decimal(20);
        write!(f, "{re} + {im}i")
    }
}

/// Scientific decimal rendering with `digits` significant digits.
pub fn float_decimal(x: &Float, digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    x.to_string_radix(10, Some(digits.max(2)))
}

impl Scalar for ComplexBig {
    type Ctx = u32;
    const EXACT: bool = false;

    fn ctx(&self) -> u32 {
        self.re.prec()
    }

    fn describe_ctx(ctx: u32) -> String {
        format!("{ctx}-bit float")
    }

    fn zero(prec: u32) -> Self {
        Self { re: Float::new(prec), im: Float::new(prec) }
    }

    fn from_i64(v: i64, prec: u32) -> Self {
        Self { re: Float::with_val(prec, v), im: Float::new(prec) }
    }

    fn from_rational(re: &Rational, im: &Rational, prec: u32) -> Self {
        Self { re: Float::with_val(prec, re), im: Float::with_val(prec, im) }
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn add_assign(&mut self, rhs: &Self) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }

    fn sub_assign(&mut self, rhs: &Self) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }

    fn add_assign_rotated(&mut self, rhs: &Self, k: u8) {
        match k & 3 {
            0 => {
                self.re += &rhs.re;
                self.im += &rhs.im;
            }
            1 => {
                self.re -= &rhs.im;
                self.im += &rhs.re;
            }
            2 => {
                self.re -= &rhs.re;
                self.im -= &rhs.im;
            }
            _ => {
                self.re += &rhs.im;
                self.im -= &rhs.re;
            }
        }
    }

    fn mul(&self, rhs: &Self) -> Self {
        let p = self.prec();
        let mut re = Float::with_val(p, &self.re * &rhs.re);
        re -= &self.im * &rhs.im;
        let mut im = Float::with_val(p, &self.re * &rhs.im);
        im += &self.im * &rhs.re;
        Self { re, im }
    }

    fn div(&self, rhs: &Self) -> Option<Self> {
        if rhs.is_zero() {
            return None;
        }
        let p = self.prec();
        let mut den = Float::with_val(p, rhs.re.square_ref());
        den += Float::with_val(p, rhs.im.square_ref());
        let num = self.mul(&rhs.conj());
        Some(Self { re: num.re / &den, im: num.im / &den })
    }

    fn neg(&self) -> Self {
        let mut out = self.clone();
        out.re.neg_assign();
        out.im.neg_assign();
        out
    }

    fn conj(&self) -> Self {
        let mut out = self.clone();
        out.im.neg_assign();
        out
    }

    fn norm_sqr(&self) -> Self {
        let mut re = Float::with_val(self.prec(), self.re.square_ref());
        re += Float::with_val(self.prec(), self.im.square_ref());
        Self::real(re)
    }

    fn sqrt(&self) -> Option<Self> {
        let p = self.prec();
        if self.im.is_zero() {
            if self.re.is_sign_negative() && !self.re.is_zero() {
                let mut r = Float::with_val(p, -&self.re);
                r.sqrt_mut();
                return Some(Self { re: Float::new(p), im: r });
            }
            return Some(Self::real(Float::with_val(p, self.re.sqrt_ref())));
        }
        let r = self.abs();
        let mut re = Float::with_val(p, &r + &self.re);
        re /= 2;
        re.sqrt_mut();
        let mut im = Float::with_val(p, &r - &self.re);
        im /= 2;
        im.sqrt_mut();
        if self.im.is_sign_negative() {
            im.neg_assign();
        }
        Some(Self { re, im })
    }

    fn re_f64(&self) -> f64 {
        self.re.to_f64()
    }

    fn im_f64(&self) -> f64 {
        self.im.to_f64()
    }

    fn log2_abs(&self) -> f64 {
        float_log2_abs(&self.abs())
    }

    fn to_decimal(&self, digits: usize) -> (String, String) {
        (float_decimal(&self.re, digits), float_decimal(&self.im, digits))
    }
}

/// Number of decimal digits that a `prec`-bit float carries.
pub fn decimal_digits(prec: u32) -> usize {
    ((f64::from(prec)) / std::f64::consts::LOG2_10).floor() as usize
}

// ---------------------------------------------------------------------------

/// Parse a decimal literal (`-1.05`, `2.5e-3`, `1/6`) into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n = parse_rational(n)?;
        let d = parse_rational(d)?;
        if d.cmp0() == Ordering::Equal {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(n / d);
    }
    let bad = || Error::Parse(format!("not a decimal number: {s:?}"));
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
    if int.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !int.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int}{frac}");
    let mut r = Rational::from(rug::Integer::from_str_radix(if digits.is_empty() { "0" } else { &digits }, 10).map_err(|_| bad())?);
    let shift = exp - frac.len() as i32;
    let ten = rug::Integer::from(10);
    let scale = Rational::from(rug::ops::Pow::pow(ten, shift.unsigned_abs()));
    if shift >= 0 {
        r *= scale;
    } else {
        r /= scale;
    }
    if neg {
        r.neg_assign();
    }
    Ok(r)
}

/// Exact rational for the shortest decimal that round-trips `x`.
pub fn decimal_rational(x: f64) -> Result<Rational> {
    if !x.is_finite() {
        return Err(Error::Parse(format!("non-finite value {x}")));
    }
    parse_rational(&format!("{x:e}"))
}

/// Parse a decimal string into a float at `prec` bits.
/// Ratios `p/q` go through [`parse_rational`].
pub fn parse_float(s: &str, prec: u32) -> Result<Float> {
    if s.contains('/') {
        return Ok(Float::with_val(prec, parse_rational(s)?));
    }
    let parsed = Float::parse(s.trim()).map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
    Ok(Float::with_val(prec, parsed))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(re: f64, im: f64) -> ComplexBig {
        ComplexBig::from_f64(re, im, 256)
    }

    #[test]
    fn exact_field_ops() {
        let a = ComplexExact::new(Rational::from((1, 2)), Rational::from(3));
        let b = ComplexExact::new(Rational::from(-2), Rational::from((1, 3)));
        let q = a.div(&b).unwrap();
        assert_eq!(q.mul(&b), a);
        assert_eq!(a.mul_i_pow(2), a.neg());
        assert_eq!(a.mul_i_pow(1).mul_i_pow(3), a);
        assert!(a.div(&ComplexExact::zero(())).is_none());
    }

    #[test]
    fn exact_sqrt_only_for_squares() {
        let r = ComplexExact::real(Rational::from((9, 4)));
        assert_eq!(r.sqrt().unwrap(), ComplexExact::real(Rational::from((3, 2))));
        assert!(ComplexExact::real(Rational::from(2)).sqrt().is_none());
        let n = ComplexExact::real(Rational::from(-4));
        assert_eq!(n.sqrt().unwrap(), ComplexExact::new(Rational::new(), Rational::from(2)));
    }

    #[test]
    fn big_sqrt_principal_branch() {
        let z = big(-3.0, -4.0);
        let s = z.sqrt().unwrap();
        assert!((s.re_f64() - 1.0).abs() < 1e-30);
        assert!((s.im_f64() + 2.0).abs() < 1e-30);
        let back = s.mul(&s);
        assert!(rel_diff(&back, &z) < 1e-70);
    }

    #[test]
    fn rotation_matches_multiplication() {
        let z = big(1.5, -0.25);
        let i = big(0.0, 1.0);
        let mut acc = z.clone();
        for k in 1..4u8 {
            acc = acc.mul(&i);
            assert_eq!(z.mul_i_pow(k), acc);
        }
    }

    #[test]
    fn log2_abs_handles_huge_values() {
        let f = rug::Integer::from(rug::Integer::factorial(400));
        let e = ComplexExact::real(Rational::from(f));
        let l = e.log2_abs();
        assert!(l > 2800.0 && l < 2900.0, "{l}");
        assert_eq!(ComplexExact::zero(()).log2_abs(), f64::NEG_INFINITY);
    }

    #[test]
    fn precision_mismatch_is_reported() {
        let a = ComplexBig::zero(128);
        let b = ComplexBig::zero(256);
        assert!(matches!(a.same_ctx(&b), Err(Error::PrecisionMismatch { .. })));
        assert!(a.same_ctx(&a.clone()).is_ok());
    }

    #[test]
    fn decimal_parsing_is_exact() {
        assert_eq!(parse_rational("-1.05").unwrap(), Rational::from((-21, 20)));
        assert_eq!(parse_rational("0.5").unwrap(), Rational::from((1, 2)));
        assert_eq!(parse_rational("1/6").unwrap(), Rational::from((1, 6)));
        assert_eq!(parse_rational("2.5e-3").unwrap(), Rational::from((1, 400)));
        assert_eq!(parse_rational("3e2").unwrap(), Rational::from(300));
        assert_eq!(decimal_rational(0.1).unwrap(), Rational::from((1, 10)));
        assert!(parse_rational("1.2.3").is_err());
        assert!(parse_rational("abc").is_err());
    }
}
