// SPDX-License-Identifier: Apache-2.0

mod common;

use common::dense_ising_moment;
use opgrowth::lindblad::{apply, apply_adjoint, apply_dissipator, IsingParams, LindbladianSpec};
use opgrowth::moments::ising_moments;
use opgrowth::opspace::{Letter, PauliString, TIOperator};
use opgrowth::pipeline::ising_o0;
use opgrowth::scalar::{ComplexBig, ComplexExact, Scalar};
use proptest::prelude::*;
use rug::Rational;

fn close(a: num_complex::Complex64, b: num_complex::Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * a.norm().max(b.norm()).max(1.0)
}

#[test]
fn thermodynamic_moments_match_dense_chain() {
    for eta in [0.0, 0.1, 0.35] {
        let spec = IsingParams::with_eta(eta).unwrap().spec();
        let mu = ising_moments(&spec, &ising_o0::<ComplexBig>(256), 8).unwrap();
        for n in 0..=8 {
            let dense = dense_ising_moment(eta, n);
            let ours = mu.mu[n].to_c64();
            assert!(close(ours, dense, 1e-10), "eta {eta} n {n}: {ours} vs {dense}");
        }
    }
}

#[test]
fn exact_moments_match_dense_chain() {
    let spec = IsingParams::with_eta(0.2).unwrap().spec();
    let mu = ising_moments(&spec, &ising_o0::<ComplexExact>(()), 6).unwrap();
    for n in 0..=6 {
        assert!(close(mu.mu[n].to_c64(), dense_ising_moment(0.2, n), 1e-11), "n {n}");
    }
}

fn letter() -> impl Strategy<Value = Letter> {
    prop_oneof![Just(Letter::X), Just(Letter::Y), Just(Letter::Z)]
}

fn op() -> impl Strategy<Value = TIOperator<ComplexExact>> {
    prop::collection::vec((prop::collection::vec(prop::option::of(letter()), 1..5), -3i32..4, -3i32..4), 1..5)
        .prop_map(|terms| {
            let terms = terms.into_iter().filter_map(|(ls, re, im)| {
                let s = PauliString::from_letters(ls.into_iter().enumerate().filter_map(|(k, l)| l.map(|l| (k as i64, l))))
                    .unwrap();
                (!s.is_identity()).then(|| (s.anchor(), ComplexExact::new(Rational::from(re), Rational::from(im))))
            });
            TIOperator::from_terms((), terms).unwrap()
        })
}

fn spec(eta: (u32, u32)) -> LindbladianSpec {
    IsingParams::default().eta_rational(Rational::from(eta)).unwrap().spec()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn adjoint_is_the_adjoint(a in op(), b in op(), num in 0u32..5, den in 1u32..5) {
        let s = spec((num, den));
        let lhs = a.inner(&apply(&s, &b).unwrap()).unwrap();
        let rhs = apply_adjoint(&s, &a).unwrap().inner(&b).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn dissipator_counts_xy_letters(ls in prop::collection::vec(letter(), 1..8), num in 1u32..5) {
        let p = PauliString::from_letters(ls.iter().enumerate().map(|(k, l)| (k as i64, *l))).unwrap().anchor();
        let o = TIOperator::<ComplexExact>::lattice_sum(p, ());
        let out = apply_dissipator(&spec((num, 7)), &o).unwrap();
        let nxy = ls.iter().filter(|l| **l != Letter::Z).count() as u32;
        let want = ComplexExact::new(Rational::new(), Rational::from((2 * num * nxy, 7)));
        if nxy == 0 {
            prop_assert!(out.is_empty());
        } else {
            prop_assert_eq!(out.coefficient(&p), Some(&want));
            prop_assert_eq!(out.len(), 1);
        }
    }

    #[test]
    fn moment_parity(num in 0u32..6, den in 1u32..6) {
        let mu = ising_moments(&spec((num, den)), &ising_o0::<ComplexExact>(()), 7).unwrap();
        for (n, m) in mu.mu.iter().enumerate() {
            if n % 2 == 0 { prop_assert!(m.im == 0); } else { prop_assert!(m.re == 0); }
        }
    }
}
