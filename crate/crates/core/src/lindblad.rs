// SPDX-License-Identifier: Apache-2.0

//! Lindbladian superoperator with Hermitian dephasing jumps, acting on
//! translation-invariant operator densities.
//!
//! Convention: `ℒ = ℒ_u + ℒ_d` with `ℒ_u(O) = [H, O]` and
//! `ℒ_d(O) = -iη Σ_i (h_i O h_i - O)`, `h_i = Z_i`. Then `e^{iℒt}` is the
//! physical Heisenberg evolution, a string `P` is an eigenvector of `ℒ_d`
//! with eigenvalue `2iη·n_xy(P)`, and `ℒ† = ℒ_u - ℒ_d`.

use rayon::prelude::*;
use rug::Rational;
use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::opspace::{product_phase, PauliString, TIOperator};
use crate::scalar::{decimal_rational, parse_rational, Scalar};

/// Source terms handled per parallel work unit. Fixed so the summation order
/// (hence big-float rounding) does not depend on the thread count.
const CHUNK: usize = 2048;

/// Dephasing axis of the jump operators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JumpAxis {
    Z,
}

/// Sign/phase convention of the generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Convention {
    /// `ℒ_u = [H, ·]`, `ℒ_d = -iη Σ (h·h - ·)`; moments are `(O|ℒⁿ|O)`.
    #[default]
    Commutator,
    /// The literal generator `dO/dt = i[H, O] + η Σ (hOh - O)`, which equals
    /// `i` times the commutator convention.
    Generator,
}

/// Tilted-field Ising chain `H = Σ Jxx X_i X_{i+1} + hz Z_i + hx X_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct IsingParams {
    pub jxx: Rational,
    pub hz: Rational,
    pub hx: Rational,
    pub eta: Rational,
}

impl Default for IsingParams {
    fn default() -> Self {
        Self {
            jxx: Rational::from(1),
            hz: Rational::from((-21, 20)),
            hx: Rational::from((1, 2)),
            eta: Rational::new(),
        }
    }
}

impl IsingParams {
    /// Default couplings at dissipation `eta` (converted through its
    /// shortest decimal form, so `0.1` is exactly `1/10`).
    pub fn with_eta(eta: f64) -> Result<Self> {
        Self::default().eta_rational(decimal_rational(eta)?)
    }

    pub fn eta_rational(self, eta: Rational) -> Result<Self> {
        if eta < 0 {
            return Err(Error::InvalidParameter(format!("eta must be >= 0, got {eta}")));
        }
        Ok(Self { eta, ..self })
    }

    pub fn spec(&self) -> LindbladianSpec {
        let xx: PauliString = PauliString::anchored(0b11, 0);
        let z = PauliString::anchored(0, 1);
        let x = PauliString::anchored(1, 0);
        let hamiltonian = [(xx, self.jxx.clone()), (z, self.hz.clone()), (x, self.hx.clone())]
            .into_iter()
            .filter(|(_, c)| *c != 0)
            .collect();
        LindbladianSpec { hamiltonian, eta: self.eta.clone(), jump_axis: JumpAxis::Z, convention: Convention::Commutator }
    }
}

/// Hamiltonian orbits with real coefficients, dephasing strength and
/// convention.
#[derive(Clone, Debug, PartialEq)]
pub struct LindbladianSpec {
    pub hamiltonian: Vec<(PauliString, Rational)>,
    pub eta: Rational,
    pub jump_axis: JumpAxis,
    pub convention: Convention,
}

impl LindbladianSpec {
    pub fn new(hamiltonian: Vec<(PauliString, Rational)>, eta: Rational) -> Result<Self> {
        if eta < 0 {
            return Err(Error::InvalidParameter(format!("eta must be >= 0, got {eta}")));
        }
        let hamiltonian = hamiltonian.into_iter().map(|(p, c)| (p.anchor(), c)).filter(|(p, c)| *c != 0 && !p.is_identity()).collect();
        Ok(Self { hamiltonian, eta, jump_axis: JumpAxis::Z, convention: Convention::Commutator })
    }

    fn max_h_span(&self) -> u32 {
        self.hamiltonian.iter().map(|h| h.0.span()).max().unwrap_or(1)
    }

    /// Run-config key/value pairs.
    pub fn to_config(&self) -> Result<Vec<(String, String)>> {
        let pick = |target: PauliString| {
            self.hamiltonian.iter().find(|h| h.0 == target).map(|h| h.1.clone()).unwrap_or_default()
        };
        let params = IsingParams {
            jxx: pick(PauliString::anchored(0b11, 0)),
            hz: pick(PauliString::anchored(0, 1)),
            hx: pick(PauliString::anchored(1, 0)),
            eta: self.eta.clone(),
        };
        if params.spec().hamiltonian != self.hamiltonian {
            return Err(Error::Config("only Ising-form Hamiltonians serialize to a run config".into()));
        }
        Ok(vec![
            ("model".into(), "ising".into()),
            ("jxx".into(), params.jxx.to_string()),
            ("hz".into(), params.hz.to_string()),
            ("hx".into(), params.hx.to_string()),
            ("eta".into(), params.eta.to_string()),
            ("jump_axis".into(), "z".into()),
        ])
    }

    /// Inverse of [`to_config`](Self::to_config); unknown keys are errors,
    /// missing couplings take their defaults.
    pub fn from_config<'a, I: IntoIterator<Item = (&'a str, &'a str)>>(pairs: I) -> Result<Self> {
        let mut p = IsingParams::default();
        for (k, v) in pairs {
            match k {
                "model" if v == "ising" => {}
                "model" => return Err(Error::Config(format!("unsupported model {v:?}"))),
                "jump_axis" if v.eq_ignore_ascii_case("z") => {}
                "jump_axis" => return Err(Error::Config(format!("unsupported jump axis {v:?}"))),
                "jxx" => p.jxx = parse_rational(v)?,
                "hz" => p.hz = parse_rational(v)?,
                "hx" => p.hx = parse_rational(v)?,
                "eta" => p = p.eta_rational(parse_rational(v)?)?,
                _ => return Err(Error::Config(format!("unknown lindbladian key {k:?}"))),
            }
        }
        Ok(p.spec())
    }
}

/// Optional limits on an application.
#[derive(Clone, Copy, Debug, Default)]
pub struct ApplyLimits {
    /// Refuse outputs with more terms than this.
    pub term_budget: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Part {
    Unitary,
    Dissipator,
    Full,
    Adjoint,
}

/// `ℒ_u(o) = [H, o]`.
pub fn apply_unitary<S: Scalar>(spec: &LindbladianSpec, o: &TIOperator<S>) -> Result<TIOperator<S>> {
    run(spec, o, Part::Unitary, ApplyLimits::default())
}

/// `ℒ_d(o)`, diagonal in the string basis.
pub fn apply_dissipator<S: Scalar>(spec: &LindbladianSpec, o: &TIOperator<S>) -> Result<TIOperator<S>> {
    run(spec, o, Part::Dissipator, ApplyLimits::default())
}

/// `ℒ(o) = ℒ_u(o) + ℒ_d(o)`.
pub fn apply<S: Scalar>(spec: &LindbladianSpec, o: &TIOperator<S>) -> Result<TIOperator<S>> {
    run(spec, o, Part::Full, ApplyLimits::default())
}

/// `ℒ†(o) = ℒ_u(o) - ℒ_d(o)`.
pub fn apply_adjoint<S: Scalar>(spec: &LindbladianSpec, o: &TIOperator<S>) -> Result<TIOperator<S>> {
    run(spec, o, Part::Adjoint, ApplyLimits::default())
}

/// [`apply`] or [`apply_adjoint`] with limits.
pub fn apply_with<S: Scalar>(
    spec: &LindbladianSpec,
    o: &TIOperator<S>,
    adjoint: bool,
    limits: ApplyLimits,
) -> Result<TIOperator<S>> {
    run(spec, o, if adjoint { Part::Adjoint } else { Part::Full }, limits)
}

fn run<S: Scalar>(spec: &LindbladianSpec, o: &TIOperator<S>, part: Part, limits: ApplyLimits) -> Result<TIOperator<S>> {
    let ctx = o.ctx();
    let shift = spec.max_h_span() - 1;
    if o.max_span() + 2 * shift > crate::opspace::MAX_SPAN {
        return Err(Error::SupportOverflow { max: crate::opspace::MAX_SPAN });
    }
    let do_u = matches!(part, Part::Unitary | Part::Full | Part::Adjoint);
    let do_d = matches!(part, Part::Dissipator | Part::Full | Part::Adjoint) && spec.eta != 0;

    // 2·h per Hamiltonian term; commutator of anticommuting strings is 2hP.
    let hs: Vec<(u64, u64, u32, S)> = spec
        .hamiltonian
        .iter()
        .map(|(p, c)| {
            let two_c = Rational::from(c * 2u32);
            (p.x_mask(), p.z_mask(), p.span(), S::from_rational(&two_c, &Rational::new(), ctx))
        })
        .collect();
    // ±2η, multiplied by i below; the generator convention adds another i^±1.
    let mut eta2 = Rational::from(&spec.eta * 2u32);
    if part == Part::Adjoint {
        eta2 = -eta2;
    }
    let eta2 = S::from_rational(&eta2, &Rational::new(), ctx);
    let rot: u8 = match (spec.convention, part) {
        (Convention::Commutator, _) => 0,
        (Convention::Generator, Part::Adjoint) => 3,
        (Convention::Generator, _) => 1,
    };

    let chunks: Vec<Vec<(PauliString, S)>> = o
        .terms()
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut acc: FxHashMap<(u64, u64), S> = FxHashMap::default();
            let mut add = |key: (u64, u64), v: &S, k: u8| {
                acc.entry(key).or_insert_with(|| S::zero(ctx)).add_assign_rotated(v, k.wrapping_add(rot));
            };
            for (p, c) in chunk {
                if do_u {
                    let x = p.x_mask() << shift;
                    let z = p.z_mask() << shift;
                    let len = 64 - (x | z).leading_zeros();
                    for (hx, hz, hspan, two_h) in &hs {
                        let w = c.mul(two_h);
                        for s in 0..len.min(65 - hspan) {
                            let (qx, qz) = (hx << s, hz << s);
                            if ((qx & z) ^ (qz & x)).count_ones() % 2 == 0 {
                                continue;
                            }
                            let k = product_phase(qx, qz, x, z);
                            let r = PauliString::anchored(qx ^ x, qz ^ z);
                            add((r.x_mask(), r.z_mask()), &w, k);
                        }
                    }
                }
                if do_d {
                    let n = p.n_xy();
                    if n > 0 {
                        let w = c.mul(&eta2).mul(&S::from_i64(i64::from(n), ctx));
                        add((p.x_mask(), p.z_mask()), &w, 1);
                    }
                }
            }
            let mut v: Vec<(PauliString, S)> =
                acc.into_iter().map(|((x, z), c)| (PauliString::anchored(x, z), c)).collect();
            v.sort_unstable_by_key(|a| a.0);
            v
        })
        .collect();

    let total: usize = chunks.iter().map(Vec::len).sum();
    let merged: Vec<(PauliString, S)> = if chunks.len() == 1 {
        chunks.into_iter().next().unwrap_or_default()
    } else {
        let mut all = Vec::with_capacity(total);
        for c in chunks {
            all.extend(c);
        }
        // stable: equal keys keep chunk order
        all.sort_by_key(|a| a.0);
        all
    };
    let mut terms: Vec<(PauliString, S)> = Vec::with_capacity(merged.len());
    for (p, c) in merged {
        match terms.last_mut() {
            Some((q, acc)) if *q == p => acc.add_assign(&c),
            _ => terms.push((p, c)),
        }
    }
    terms.retain(|(_, c)| !c.is_zero());
    if let Some(budget) = limits.term_budget {
        if terms.len() > budget {
            return Err(Error::TermBudget { terms: terms.len(), budget });
        }
    }
    Ok(TIOperator::from_sorted_unchecked(ctx, terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{ComplexBig, ComplexExact};
    use proptest::prelude::*;

    fn ps(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    fn ex(re: i64, im: i64) -> ComplexExact {
        ComplexExact::new(Rational::from(re), Rational::from(im))
    }

    fn op(terms: &[(&str, ComplexExact)]) -> TIOperator<ComplexExact> {
        TIOperator::from_terms((), terms.iter().map(|(s, c)| (ps(s), c.clone()))).unwrap()
    }

    #[test]
    fn xx_commutator_with_z() {
        let spec = LindbladianSpec::new(vec![(ps("X0 X1"), Rational::from(1))], Rational::new()).unwrap();
        let o = op(&[("Z0", ex(1, 0))]);
        let out = apply_unitary(&spec, &o).unwrap();
        // [XX, Z] at both bond placements touching the Z.
        assert_eq!(out.coefficient(&ps("Y0 X1")), Some(&ex(0, -2)));
        assert_eq!(out.coefficient(&ps("X0 Y1")), Some(&ex(0, -2)));
        assert_eq!(out.len(), 2);
    }

    #[test]
    fn hx_only_commutes_with_x_density() {
        let spec = LindbladianSpec::new(vec![(ps("X0"), Rational::from(1))], Rational::new()).unwrap();
        let o = op(&[("X0", ex(1, 0))]);
        assert!(apply_unitary(&spec, &o).unwrap().is_empty());
    }

    #[test]
    fn ising_first_step() {
        let spec = IsingParams::default().spec();
        let o = op(&[("X0", ex(1, 0))]);
        let out = apply_unitary(&spec, &o).unwrap();
        // [hz Z, X] = 2i hz Y
        assert_eq!(out.coefficient(&ps("Y0")), Some(&ComplexExact::new(Rational::new(), Rational::from((-21, 10)))));
        assert_eq!(out.len(), 1);
    }

    #[test]
    fn dissipator_examples() {
        let eta = Rational::from((1, 10));
        let spec = IsingParams::default().eta_rational(eta.clone()).unwrap().spec();
        let two_eta_i = ComplexExact::new(Rational::new(), Rational::from(&eta * 2u32));
        let x = op(&[("X0", ex(1, 0))]);
        assert_eq!(apply_dissipator(&spec, &x).unwrap(), x.scale(&two_eta_i));
        let zz = op(&[("Z0 Z3", ex(1, 0))]);
        assert!(apply_dissipator(&spec, &zz).unwrap().is_empty());
        let xyz = op(&[("X0 Y1 Z2", ex(1, 0))]);
        let four = two_eta_i.mul(&ComplexExact::from_i64(2, ()));
        assert_eq!(apply_dissipator(&spec, &xyz).unwrap(), xyz.scale(&four));
    }

    #[test]
    fn closed_system_adjoint_equals_forward() {
        let spec = IsingParams::default().spec();
        let o = op(&[("X0", ex(1, 0)), ("Y0 Z2", ex(3, -1))]);
        assert_eq!(apply(&spec, &o).unwrap(), apply_adjoint(&spec, &o).unwrap());
    }

    #[test]
    fn identity_is_annihilated() {
        let spec = IsingParams::with_eta(0.3).unwrap().spec();
        let id = TIOperator::<ComplexExact>::lattice_sum(PauliString::IDENTITY, ());
        assert!(apply(&spec, &id).unwrap().is_empty());
        assert!(apply_adjoint(&spec, &id).unwrap().is_empty());
    }

    #[test]
    fn generator_convention_is_i_times_commutator() {
        let mut spec = IsingParams::with_eta(0.2).unwrap().spec();
        let o = op(&[("X0", ex(1, 0)), ("Y0 X1", ex(0, 1))]);
        let base = apply(&spec, &o).unwrap();
        let base_adj = apply_adjoint(&spec, &o).unwrap();
        spec.convention = Convention::Generator;
        assert_eq!(apply(&spec, &o).unwrap(), base.scale(&ex(0, 1)));
        assert_eq!(apply_adjoint(&spec, &o).unwrap(), base_adj.scale(&ex(0, -1)));
    }

    #[test]
    fn light_cone() {
        let spec = IsingParams::with_eta(0.1).unwrap().spec();
        let mut o = op(&[("X0", ex(1, 0))]);
        for n in 1..=10u32 {
            o = apply(&spec, &o).unwrap();
            assert!(o.max_span() <= n + 1, "n={n} span={}", o.max_span());
        }
    }

    #[test]
    fn term_budget_is_enforced() {
        let spec = IsingParams::default().spec();
        let mut o = op(&[("X0", ex(1, 0))]);
        for _ in 0..4 {
            o = apply(&spec, &o).unwrap();
        }
        let limits = ApplyLimits { term_budget: Some(3) };
        assert!(matches!(apply_with(&spec, &o, false, limits), Err(Error::TermBudget { .. })));
    }

    #[test]
    fn support_overflow_is_an_error() {
        let spec = IsingParams::default().spec();
        let wide = PauliString::from_masks(0, 1 | (1 << 63), 0);
        let o = TIOperator::<ComplexExact>::lattice_sum(wide, ());
        assert!(matches!(apply(&spec, &o), Err(Error::SupportOverflow { .. })));
    }

    #[test]
    fn parallel_chunks_match_sequential_order() {
        let spec = IsingParams::with_eta(0.1).unwrap().spec();
        let mut o = TIOperator::<ComplexBig>::lattice_sum(ps("X0"), 128);
        for _ in 0..16 {
            o = apply(&spec, &o).unwrap();
        }
        assert!(o.len() > CHUNK);
        let a = apply(&spec, &o).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(|| apply(&spec, &o).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn config_round_trip() {
        let spec = IsingParams::with_eta(0.25).unwrap().spec();
        let cfg = spec.to_config().unwrap();
        let back = LindbladianSpec::from_config(cfg.iter().map(|(k, v)| (k.as_str(), v.as_str()))).unwrap();
        assert_eq!(back, spec);
        assert!(LindbladianSpec::from_config([("model", "heisenberg")]).is_err());
        assert!(LindbladianSpec::from_config([("eta", "-1")]).is_err());
    }

    fn arb_op() -> impl Strategy<Value = TIOperator<ComplexExact>> {
        prop::collection::vec((0u64..64, 0u64..64, -4i64..4, -4i64..4), 1..6).prop_map(|v| {
            TIOperator::from_terms((), v.into_iter().map(|(x, z, re, im)| (PauliString::anchored(x, z), ex(re, im))))
                .unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn adjoint_property(a in arb_op(), b in arb_op(), eta_num in 0i64..8) {
            let spec = IsingParams::default().eta_rational(Rational::from((eta_num, 7))).unwrap().spec();
            let lhs = a.inner(&apply(&spec, &b).unwrap()).unwrap();
            let rhs = b.inner(&apply_adjoint(&spec, &a).unwrap()).unwrap().conj();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn dissipator_is_diagonal(a in arb_op()) {
            let spec = IsingParams::with_eta(0.3).unwrap().spec();
            let d = apply_dissipator(&spec, &a).unwrap();
            for (p, _) in d.terms() {
                prop_assert!(a.coefficient(p).is_some());
            }
        }
    }
}
