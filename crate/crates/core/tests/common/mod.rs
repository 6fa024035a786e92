// SPDX-License-Identifier: Apache-2.0

//! Oracles written independently of the library internals.

#![allow(dead_code)]

use num_complex::Complex64;
use opgrowth::bilanczos::KrylovSpace;
use opgrowth::scalar::{ComplexExact, Scalar};
use rug::Rational;

pub const JXX: f64 = 1.0;
pub const HZ: f64 = -1.05;
pub const HX: f64 = 0.5;

/// Dense periodic chain of `l` sites; operators are `2^l x 2^l` matrices.
pub struct DenseChain {
    pub l: usize,
    pub eta: f64,
    dim: usize,
}

impl DenseChain {
    pub fn new(l: usize, eta: f64) -> Self {
        Self { l, eta, dim: 1 << l }
    }

    fn z(a: usize, i: usize) -> f64 {
        if a >> i & 1 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    /// `(row, col, value)` of H restricted to one row; H is real symmetric.
    fn h_row(&self, a: usize, out: &mut Vec<(usize, f64)>) {
        out.clear();
        let diag: f64 = (0..self.l).map(|i| HZ * Self::z(a, i)).sum();
        out.push((a, diag));
        for i in 0..self.l {
            let j = (i + 1) % self.l;
            out.push((a ^ (1 << i), HX));
            out.push((a ^ (1 << i) ^ (1 << j), JXX));
        }
    }

    /// `Σ_i X_i`.
    pub fn sum_x(&self) -> Vec<Complex64> {
        let d = self.dim;
        let mut m = vec![Complex64::new(0.0, 0.0); d * d];
        for a in 0..d {
            for i in 0..self.l {
                m[a * d + (a ^ (1 << i))] += 1.0;
            }
        }
        m
    }

    /// `[H, o] - iη Σ_i (Z_i o Z_i - o)`.
    pub fn lindblad(&self, o: &[Complex64]) -> Vec<Complex64> {
        let d = self.dim;
        let mut out = vec![Complex64::new(0.0, 0.0); d * d];
        let mut row = Vec::new();
        for a in 0..d {
            self.h_row(a, &mut row);
            for &(c, h) in &row {
                for b in 0..d {
                    out[a * d + b] += h * o[c * d + b];
                    out[b * d + a] -= h * o[b * d + c];
                }
            }
        }
        for a in 0..d {
            for b in 0..d {
                let mut s = 0.0;
                for i in 0..self.l {
                    s += Self::z(a, i) * Self::z(b, i) - 1.0;
                }
                out[a * d + b] += Complex64::new(0.0, -self.eta * s) * o[a * d + b];
            }
        }
        out
    }

    /// `Tr(a† b) / 2^l`.
    pub fn inner(&self, a: &[Complex64], b: &[Complex64]) -> Complex64 {
        a.iter().zip(b).map(|(x, y)| x.conj() * y).sum::<Complex64>() / self.dim as f64
    }
}

/// `μ_n / L` on a periodic chain of `L = n + 2` sites.
pub fn dense_ising_moment(eta: f64, n: usize) -> Complex64 {
    let chain = DenseChain::new(n + 2, eta);
    let o = chain.sum_x();
    let mut v = o.clone();
    for _ in 0..n {
        v = chain.lindblad(&v);
    }
    chain.inner(&o, &v) / chain.l as f64
}

/// Toy moments by powering the hopping matrix on a finite window.
pub fn toy_moments_by_matrix(j: &Rational, eta: &Rational, n: usize) -> Vec<ComplexExact> {
    let dim = n + 1;
    // ℒ|p⟩ = J|p+1⟩ + iηp|p⟩
    let mut state = vec![ComplexExact::zero(()); dim];
    state[0] = ComplexExact::one(());
    let mut fact = vec![Rational::from(1)];
    for p in 1..dim {
        let f = &fact[p - 1] * Rational::from(p as u32);
        fact.push(f);
    }
    let mut out = Vec::new();
    for step in 0..=n {
        let mut acc = ComplexExact::zero(());
        for (p, c) in state.iter().enumerate() {
            if p % 2 == 0 {
                acc.add_assign(&c.mul(&ComplexExact::real(fact[p].clone())));
            }
        }
        out.push(acc);
        if step == n {
            break;
        }
        let mut next = vec![ComplexExact::zero(()); dim];
        for p in 0..dim {
            let diag = ComplexExact::new(Rational::new(), eta * Rational::from(p as u32));
            next[p].add_assign(&diag.mul(&state[p]));
            if p + 1 < dim {
                next[p + 1].add_assign(&ComplexExact::real(j.clone()).mul(&state[p]));
            }
        }
        state = next;
    }
    out
}

/// Determinant by cofactor-free Gaussian elimination with exact pivoting
/// on the first nonzero entry.
pub fn det_exact(mut m: Vec<Vec<ComplexExact>>) -> ComplexExact {
    let n = m.len();
    let mut det = ComplexExact::one(());
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return ComplexExact::zero(());
        };
        if piv != col {
            m.swap(piv, col);
            det = det.neg();
        }
        let p = m[col][col].clone();
        det = det.mul(&p);
        for r in col + 1..n {
            let f = m[r][col].div(&p).unwrap();
            for c in col..n {
                let t = f.mul(&m[col][c]);
                m[r][c].sub_assign(&t);
            }
        }
    }
    det
}

/// `b_n c_n` from brute-force Hankel determinants.
pub fn bc_by_brute_force(mu: &[ComplexExact], n: usize) -> Vec<ComplexExact> {
    let k = |s: isize| -> ComplexExact {
        if s < 0 {
            return ComplexExact::one(());
        }
        let s = s as usize;
        det_exact((0..=s).map(|i| (0..=s).map(|j| mu[i + j].clone()).collect()).collect())
    };
    let mut out = vec![ComplexExact::zero(())];
    for i in 1..=n as isize {
        let num = k(i).mul(&k(i - 2));
        let den = k(i - 1).mul(&k(i - 1));
        out.push(num.div(&den).unwrap());
    }
    out
}

/// Dense complex matrix as a Krylov space with the standard inner product.
pub struct DenseSpace {
    pub m: Vec<Vec<Complex64>>,
}

impl DenseSpace {
    fn mv(&self, v: &[Complex64], adjoint: bool) -> Vec<Complex64> {
        let n = self.m.len();
        (0..n)
            .map(|i| (0..n).map(|j| if adjoint { self.m[j][i].conj() * v[j] } else { self.m[i][j] * v[j] }).sum())
            .collect()
    }
}

pub type Big = opgrowth::scalar::ComplexBig;

/// Dense matrix with big-float vectors.
pub struct BigDense {
    pub m: Vec<Vec<Complex64>>,
    pub prec: u32,
}

impl BigDense {
    pub fn vector(&self, v: &[Complex64]) -> Vec<Big> {
        v.iter().map(|z| Big::from_f64(z.re, z.im, self.prec)).collect()
    }
}

impl KrylovSpace for BigDense {
    type Scalar = Big;
    type Vector = Vec<Big>;

    fn ctx(&self) -> u32 {
        self.prec
    }
    fn apply(&self, v: &Vec<Big>) -> opgrowth::Result<Vec<Big>> {
        let n = self.m.len();
        Ok((0..n)
            .map(|i| {
                let mut acc = Big::zero(self.prec);
                for j in 0..n {
                    let e = Big::from_f64(self.m[i][j].re, self.m[i][j].im, self.prec);
                    acc.add_assign(&e.mul(&v[j]));
                }
                acc
            })
            .collect())
    }
    fn apply_adjoint(&self, v: &Vec<Big>) -> opgrowth::Result<Vec<Big>> {
        let n = self.m.len();
        Ok((0..n)
            .map(|i| {
                let mut acc = Big::zero(self.prec);
                for j in 0..n {
                    let e = Big::from_f64(self.m[j][i].re, -self.m[j][i].im, self.prec);
                    acc.add_assign(&e.mul(&v[j]));
                }
                acc
            })
            .collect())
    }
    fn inner(&self, a: &Vec<Big>, b: &Vec<Big>) -> opgrowth::Result<Big> {
        let mut acc = Big::zero(self.prec);
        for (x, y) in a.iter().zip(b) {
            acc.add_assign(&x.conj().mul(y));
        }
        Ok(acc)
    }
    fn add_scaled(&self, a: &Vec<Big>, s: &Big, b: &Vec<Big>) -> opgrowth::Result<Vec<Big>> {
        Ok(a.iter().zip(b).map(|(x, y)| x.add(&s.mul(y))).collect())
    }
    fn scale(&self, a: &Vec<Big>, s: &Big) -> Vec<Big> {
        a.iter().map(|x| x.mul(s)).collect()
    }
    fn zero(&self) -> Vec<Big> {
        vec![Big::zero(self.prec); self.m.len()]
    }
}

impl DenseSpace {
    /// Plain f64 bi-Lanczos: `b_n c_n` for comparison.
    pub fn bc(&self, v0: &[Complex64], n_max: usize) -> Vec<Complex64> {
        let dot = |a: &[Complex64], b: &[Complex64]| a.iter().zip(b).map(|(x, y)| x.conj() * y).sum::<Complex64>();
        let n = v0.len();
        let zero = vec![Complex64::new(0.0, 0.0); n];
        let (mut p, mut pt) = (v0.to_vec(), v0.to_vec());
        let (mut pp, mut ppt) = (zero.clone(), zero);
        let (mut bp, mut cp) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        let mut out = vec![Complex64::new(0.0, 0.0)];
        for _ in 0..n_max {
            let lp = self.mv(&p, false);
            let ltp = self.mv(&pt, true);
            let a = dot(&pt, &lp);
            let big_a: Vec<_> = (0..n).map(|i| lp[i] - a * p[i] - cp * pp[i]).collect();
            let big_b: Vec<_> = (0..n).map(|i| ltp[i] - a.conj() * pt[i] - bp * ppt[i]).collect();
            let b = dot(&big_a, &big_a).re.sqrt();
            let c = dot(&big_b, &big_a) / b;
            out.push(b * c);
            pp = std::mem::replace(&mut p, big_a.iter().map(|x| x / b).collect());
            ppt = std::mem::replace(&mut pt, big_b.iter().map(|x| x / c.conj()).collect());
            bp = Complex64::new(b, 0.0);
            cp = c;
        }
        out
    }
}
