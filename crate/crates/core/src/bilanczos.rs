// SPDX-License-Identifier: Apache-2.0

//! Bi-orthonormal Lanczos tridiagonalization of a non-Hermitian generator.
//!
//! Starting from `O_0 = Õ_0 = o0` with `(o0|o0) = 1`:
//!
//! ```text
//! A_n = (ℒ  - a_{n-1})  O_{n-1} - c_{n-1} O_{n-2}
//! B_n = (ℒ† - a*_{n-1}) Õ_{n-1} - b_{n-1} Õ_{n-2}
//! b_n = √(A_n|A_n),  c_n = (B_n|A_n)/b_n
//! O_n = A_n/b_n,  Õ_n = B_n/c*_n,  a_n = (Õ_n|ℒ|O_n)
//! ```
//!
//! The normalized recursion needs square roots, so it runs on big floats.
//! [`bilanczos_monic`] runs the square-root-free monic form, which works in
//! exact arithmetic and yields the same `a_n` and `b_n c_n`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lindblad::{apply_with, ApplyLimits, LindbladianSpec};
use crate::opspace::TIOperator;
use crate::scalar::Scalar;

/// Vector space with a generator, its adjoint, and an inner product.
pub trait KrylovSpace {
    type Scalar: Scalar;
    type Vector: Clone;

    fn ctx(&self) -> <Self::Scalar as Scalar>::Ctx;
    fn apply(&self, v: &Self::Vector) -> Result<Self::Vector>;
    fn apply_adjoint(&self, v: &Self::Vector) -> Result<Self::Vector>;
    /// Conjugate-linear in `a`.
    fn inner(&self, a: &Self::Vector, b: &Self::Vector) -> Result<Self::Scalar>;
    /// `a + s·b`.
    fn add_scaled(&self, a: &Self::Vector, s: &Self::Scalar, b: &Self::Vector) -> Result<Self::Vector>;
    fn scale(&self, a: &Self::Vector, s: &Self::Scalar) -> Self::Vector;
    fn zero(&self) -> Self::Vector;
    /// Drop negligible components; returns how many were dropped.
    fn prune(&self, _v: &mut Self::Vector) -> usize {
        0
    }
}

/// Lindbladian acting on translation-invariant densities.
#[derive(Clone, Debug)]
pub struct LindbladSpace<S: Scalar> {
    pub spec: LindbladianSpec,
    pub ctx: S::Ctx,
    pub limits: ApplyLimits,
    /// Relative pruning threshold as `log2`; `None` never prunes.
    pub prune_log2: Option<f64>,
}

impl<S: Scalar> LindbladSpace<S> {
    pub fn new(spec: LindbladianSpec, ctx: S::Ctx) -> Self {
        Self { spec, ctx, limits: ApplyLimits::default(), prune_log2: None }
    }
}

impl<S: Scalar> KrylovSpace for LindbladSpace<S> {
    type Scalar = S;
    type Vector = TIOperator<S>;

    fn ctx(&self) -> S::Ctx {
        self.ctx
    }

    fn apply(&self, v: &TIOperator<S>) -> Result<TIOperator<S>> {
        apply_with(&self.spec, v, false, self.limits)
    }

    fn apply_adjoint(&self, v: &TIOperator<S>) -> Result<TIOperator<S>> {
        apply_with(&self.spec, v, true, self.limits)
    }

    fn inner(&self, a: &TIOperator<S>, b: &TIOperator<S>) -> Result<S> {
        a.inner(b)
    }

    fn add_scaled(&self, a: &TIOperator<S>, s: &S, b: &TIOperator<S>) -> Result<TIOperator<S>> {
        a.add_scaled(s, b)
    }

    fn scale(&self, a: &TIOperator<S>, s: &S) -> TIOperator<S> {
        a.scale(s)
    }

    fn zero(&self) -> TIOperator<S> {
        TIOperator::zero(self.ctx)
    }

    fn prune(&self, v: &mut TIOperator<S>) -> usize {
        match self.prune_log2 {
            Some(t) if !S::EXACT => v.prune_relative(t),
            _ => 0,
        }
    }
}

/// Why an iteration stopped early.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BreakdownKind {
    /// `(A_n|A_n)` fell below tolerance (invariant subspace found).
    Lucky,
    /// `(B_n|A_n)` fell below tolerance with `A_n ≠ 0`.
    Serious,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Breakdown {
    pub index: usize,
    pub kind: BreakdownKind,
}

/// Coefficients of the bi-Lanczos tridiagonal form.
///
/// Index `n` runs over `0..=n_max`; `b[0]` and `c[0]` are zero placeholders
/// so that `bc[n] = b[n]·c[n]` for every stored `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct LanczosData<S: Scalar> {
    pub a: Vec<S>,
    pub b: Vec<S>,
    pub c: Vec<S>,
    pub bc: Vec<S>,
    pub n_max: usize,
    pub breakdown: Option<Breakdown>,
    /// Terms dropped by pruning over the whole run.
    pub pruned: usize,
}

impl<S: Scalar> LanczosData<S> {
    pub fn bc_c64(&self) -> Vec<Complex64> {
        self.bc.iter().map(Scalar::to_c64).collect()
    }

    /// `|√(b_n c_n)|` per row.
    pub fn sqrt_bc_abs(&self) -> Vec<f64> {
        self.bc.iter().map(|x| x.to_c64().norm().sqrt()).collect()
    }

    /// Rows of `lanczos.csv`.
    pub fn csv_rows(&self, digits: usize) -> Vec<Vec<String>> {
        (0..=self.n_max)
            .map(|n| {
                let (are, aim) = self.a[n].to_decimal(digits);
                let (b, _) = self.b[n].to_decimal(digits);
                let (cre, cim) = self.c[n].to_decimal(digits);
                let (bcre, bcim) = self.bc[n].to_decimal(digits);
                let s = self.bc[n].to_c64().norm().sqrt();
                vec![n.to_string(), are, aim, b, cre, cim, bcre, bcim, format!("{s:e}")]
            })
            .collect()
    }
}

/// Column names of `lanczos.csv`.
pub const LANCZOS_CSV_HEADER: [&str; 9] = ["n", "a_re", "a_im", "b", "c_re", "c_im", "bc_re", "bc_im", "sqrt_bc_abs"];

/// Both Krylov bases of a run.
#[derive(Clone, Debug)]
pub struct KrylovBasis<V> {
    pub right: Vec<V>,
    pub left: Vec<V>,
}

/// Options of [`bilanczos_run_with`].
#[derive(Clone, Copy, Debug)]
pub struct LanczosOptions {
    /// Relative breakdown tolerance (`10^-20` by default).
    pub tol: f64,
    /// Re-bi-orthogonalize every new pair against all earlier vectors.
    pub rebiorthogonalize: bool,
    /// Keep both bases (for Gram/tridiagonality checks).
    pub keep_basis: bool,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        Self { tol: 1e-20, rebiorthogonalize: false, keep_basis: false }
    }
}

/// Normalized bi-Lanczos on the Lindbladian of `spec`.
pub fn bilanczos_run<S: Scalar>(
    spec: &LindbladianSpec,
    o0: &TIOperator<S>,
    n_max: usize,
) -> Result<LanczosData<S>> {
    let space = LindbladSpace::new(spec.clone(), o0.ctx());
    Ok(bilanczos_run_with(&space, o0, n_max, LanczosOptions::default())?.0)
}

fn real_sqrt<S: Scalar>(x: &S) -> Result<S> {
    x.sqrt().ok_or(Error::SqrtUnavailable)
}

/// Normalized bi-Lanczos on any [`KrylovSpace`].
pub fn bilanczos_run_with<K: KrylovSpace>(
    space: &K,
    o0: &K::Vector,
    n_max: usize,
    opts: LanczosOptions,
) -> Result<(LanczosData<K::Scalar>, Option<KrylovBasis<K::Vector>>)> {
    if n_max < 1 {
        return Err(Error::InvalidParameter("n_max must be >= 1".into()));
    }
    let ctx = space.ctx();
    let zero = K::Scalar::zero(ctx);
    let tol_log2 = if K::Scalar::EXACT { f64::NEG_INFINITY } else { opts.tol.log2() };

    let norm = space.inner(o0, o0)?;
    if rel_gap(&norm, &K::Scalar::one(ctx)) > 1e-12 {
        return Err(Error::InvalidParameter("initial operator must satisfy (o0|o0) = 1".into()));
    }

    let mut o_prev = space.zero();
    let mut ot_prev = space.zero();
    let mut o = o0.clone();
    let mut ot = o0.clone();
    let mut lo = space.apply(&o)?;
    let a0 = space.inner(&ot, &lo)?;

    let mut data = LanczosData {
        a: vec![a0],
        b: vec![zero.clone()],
        c: vec![zero.clone()],
        bc: vec![zero.clone()],
        n_max: 0,
        breakdown: None,
        pruned: 0,
    };
    let mut basis = (opts.keep_basis || opts.rebiorthogonalize).then(|| KrylovBasis { right: vec![o.clone()], left: vec![ot.clone()] });

    for n in 1..=n_max {
        let a_prev = &data.a[n - 1];
        let mut big_a = space.add_scaled(&lo, &a_prev.neg(), &o)?;
        big_a = space.add_scaled(&big_a, &data.c[n - 1].neg(), &o_prev)?;
        let lt = space.apply_adjoint(&ot)?;
        let mut big_b = space.add_scaled(&lt, &a_prev.conj().neg(), &ot)?;
        big_b = space.add_scaled(&big_b, &data.b[n - 1].neg(), &ot_prev)?;

        if opts.rebiorthogonalize {
            if let Some(bs) = &basis {
                for (r, l) in bs.right.iter().zip(&bs.left) {
                    let pa = space.inner(l, &big_a)?;
                    big_a = space.add_scaled(&big_a, &pa.neg(), r)?;
                    let pb = space.inner(r, &big_b)?;
                    big_b = space.add_scaled(&big_b, &pb.neg(), l)?;
                }
            }
        }

        let aa = space.inner(&big_a, &big_a)?;
        let scale_a = space.inner(&lo, &lo)?.log2_abs();
        if aa.is_zero() || aa.log2_abs() <= 2.0 * tol_log2 + scale_a {
            data.breakdown = Some(Breakdown { index: n, kind: BreakdownKind::Lucky });
            break;
        }
        let b = real_sqrt(&aa)?;
        let ba = space.inner(&big_b, &big_a)?;
        let bb = space.inner(&big_b, &big_b)?.log2_abs();
        if ba.is_zero() || ba.log2_abs() <= tol_log2 + b.log2_abs() + 0.5 * bb {
            data.breakdown = Some(Breakdown { index: n, kind: BreakdownKind::Serious });
            break;
        }
        let c = ba.div(&b).ok_or_else(|| Error::DivisionByZero("b_n".into()))?;
        let inv_b = K::Scalar::one(ctx).div(&b).ok_or_else(|| Error::DivisionByZero("b_n".into()))?;
        let inv_cc = K::Scalar::one(ctx).div(&c.conj()).ok_or_else(|| Error::DivisionByZero("c_n".into()))?;
        let mut o_new = space.scale(&big_a, &inv_b);
        let mut ot_new = space.scale(&big_b, &inv_cc);
        data.pruned += space.prune(&mut o_new) + space.prune(&mut ot_new);

        lo = space.apply(&o_new)?;
        let a = space.inner(&ot_new, &lo)?;

        data.bc.push(b.mul(&c));
        data.a.push(a);
        data.b.push(b);
        data.c.push(c);
        data.n_max = n;

        if let Some(bs) = &mut basis {
            bs.right.push(o_new.clone());
            bs.left.push(ot_new.clone());
        }
        o_prev = std::mem::replace(&mut o, o_new);
        ot_prev = std::mem::replace(&mut ot, ot_new);
    }
    let basis = if opts.keep_basis { basis } else { None };
    Ok((data, basis))
}

fn rel_gap<S: Scalar>(a: &S, b: &S) -> f64 {
    crate::scalar::rel_diff(a, b)
}

/// Monic recurrence coefficients: `α_n` and `b_n c_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct Recurrence<S: Scalar> {
    pub a: Vec<S>,
    /// `bc[0]` is a zero placeholder.
    pub bc: Vec<S>,
    pub breakdown: Option<Breakdown>,
}

/// Square-root-free bi-Lanczos:
/// `P_n = (ℒ - α_{n-1})P_{n-1} - β_{n-1}P_{n-2}`,
/// `Q_n = (ℒ† - α*_{n-1})Q_{n-1} - β*_{n-1}Q_{n-2}`, with
/// `β_n = (Q_n|P_n)/(Q_{n-1}|P_{n-1}) = b_n c_n`.
pub fn bilanczos_monic<K: KrylovSpace>(space: &K, o0: &K::Vector, n_max: usize) -> Result<Recurrence<K::Scalar>> {
    let ctx = space.ctx();
    let zero = K::Scalar::zero(ctx);
    let mut p_prev = space.zero();
    let mut q_prev = space.zero();
    let mut p = o0.clone();
    let mut q = o0.clone();
    let mut qp = space.inner(&q, &p)?;
    if qp.is_zero() {
        return Err(Error::InvalidParameter("initial operator has zero norm".into()));
    }
    let mut lp = space.apply(&p)?;
    let a0 = space.inner(&q, &lp)?.div(&qp).ok_or_else(|| Error::DivisionByZero("(Q_0|P_0)".into()))?;
    let mut rec = Recurrence { a: vec![a0], bc: vec![zero.clone()], breakdown: None };
    for n in 1..=n_max {
        let a_prev = &rec.a[n - 1];
        let beta_prev = &rec.bc[n - 1];
        let mut pn = space.add_scaled(&lp, &a_prev.neg(), &p)?;
        pn = space.add_scaled(&pn, &beta_prev.neg(), &p_prev)?;
        let lq = space.apply_adjoint(&q)?;
        let mut qn = space.add_scaled(&lq, &a_prev.conj().neg(), &q)?;
        qn = space.add_scaled(&qn, &beta_prev.conj().neg(), &q_prev)?;
        let qpn = space.inner(&qn, &pn)?;
        if qpn.is_zero() {
            let kind = if space.inner(&pn, &pn)?.is_zero() { BreakdownKind::Lucky } else { BreakdownKind::Serious };
            rec.breakdown = Some(Breakdown { index: n, kind });
            break;
        }
        let beta = qpn.div(&qp).ok_or_else(|| Error::DivisionByZero("(Q|P)".into()))?;
        lp = space.apply(&pn)?;
        let a = space.inner(&qn, &lp)?.div(&qpn).ok_or_else(|| Error::DivisionByZero("(Q|P)".into()))?;
        rec.a.push(a);
        rec.bc.push(beta);
        p_prev = std::mem::replace(&mut p, pn);
        q_prev = std::mem::replace(&mut q, qn);
        qp = qpn;
    }
    Ok(rec)
}

/// Largest `|(Õ_m|O_n) - δ_mn|` over the stored bases.
pub fn gram_defect<K: KrylovSpace>(space: &K, basis: &KrylovBasis<K::Vector>) -> Result<f64> {
    let one = K::Scalar::one(space.ctx());
    let mut worst = 0f64;
    for (m, l) in basis.left.iter().enumerate() {
        for (n, r) in basis.right.iter().enumerate() {
            let mut g = space.inner(l, r)?;
            if m == n {
                g.sub_assign(&one);
            }
            worst = worst.max(g.log2_abs().exp2());
        }
    }
    Ok(worst)
}

/// Largest `|(Õ_m|ℒ|O_n)|` over `|m - n| ≥ 2`.
pub fn tridiagonal_defect<K: KrylovSpace>(space: &K, basis: &KrylovBasis<K::Vector>) -> Result<f64> {
    let mut worst = 0f64;
    for (n, r) in basis.right.iter().enumerate() {
        let lr = space.apply(r)?;
        for (m, l) in basis.left.iter().enumerate() {
            if m.abs_diff(n) >= 2 {
                worst = worst.max(space.inner(l, &lr)?.log2_abs().exp2());
            }
        }
    }
    Ok(worst)
}

/// How [`detect_np`] decides that growth stopped being linear.
#[derive(Clone, Debug, PartialEq)]
pub enum DetectMode {
    /// `|b_n c_n / J² - n(n-1)| > ε`.
    Syk { j: f64 },
    /// `||√(b_n c_n)| - (s·n + t)| > ε·s` with `(s, t)` the least-squares
    /// line through `n = 1..=k`; only `n > k` is tested.
    Line { k: usize },
    /// `|b_n c_n - r_n| > ε` against a reference sequence (e.g. the closed
    /// system), indexed like `bc`.
    Reference { closed: Vec<Complex64> },
}

/// First index `n ≥ 1` where `bc` deviates from linear growth, or `None`.
/// `bc[0]` is ignored.
pub fn detect_np(bc: &[Complex64], mode: &DetectMode, epsilon: f64) -> Result<Option<usize>> {
    if !(epsilon > 0.0) {
        return Err(Error::InvalidParameter(format!("epsilon must be > 0, got {epsilon}")));
    }
    match mode {
        DetectMode::Syk { j } => {
            if !(*j > 0.0) {
                return Err(Error::InvalidParameter(format!("J must be > 0, got {j}")));
            }
            Ok((1..bc.len()).find(|&n| {
                let nf = n as f64;
                (bc[n] / (j * j) - nf * (nf - 1.0)).norm() > epsilon
            }))
        }
        DetectMode::Line { k } => {
            let k = *k;
            if k < 2 || bc.len() <= k {
                return Err(Error::TooFewMoments { needed: k + 1, have: bc.len() });
            }
            let pts: Vec<(f64, f64)> = (1..=k).map(|n| (n as f64, bc[n].norm().sqrt())).collect();
            let (s, t) = least_squares(&pts);
            Ok(((k + 1)..bc.len()).find(|&n| (bc[n].norm().sqrt() - (s * n as f64 + t)).abs() > epsilon * s.abs()))
        }
        DetectMode::Reference { closed } => {
            let len = bc.len().min(closed.len());
            Ok((1..len).find(|&n| (bc[n] - closed[n]).norm() > epsilon))
        }
    }
}

/// Ordinary least-squares line `y = s·x + t`.
pub fn least_squares(pts: &[(f64, f64)]) -> (f64, f64) {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let s = if sxx == 0.0 { 0.0 } else { sxy / sxx };
    (s, my - s * mx)
}

/// Coefficient of determination of the line `(s, t)` on `pts`.
pub fn r_squared(pts: &[(f64, f64)], s: f64, t: f64) -> f64 {
    let n = pts.len() as f64;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let ss_tot: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    let ss_res: f64 = pts.iter().map(|p| (p.1 - s * p.0 - t).powi(2)).sum();
    if ss_tot == 0.0 {
        return if ss_res == 0.0 { 1.0 } else { 0.0 };
    }
    1.0 - ss_res / ss_tot
}
