// SPDX-License-Identifier: Apache-2.0

mod common;

use common::bc_by_brute_force;
use opgrowth::error::Error;
use opgrowth::hankel::{adaptive_precision_run, from_moments_det, from_moments_recursive, LadderOptions};
use opgrowth::moments::{syk_moments, toy_moments_formula, ModelTag, MomentSequence, SykParams, ToyParams};
use opgrowth::pipeline::SykGenerator;
use opgrowth::scalar::{rel_diff, ComplexBig, ComplexExact, Scalar};
use proptest::prelude::*;
use rug::ops::Pow;
use rug::{Integer, Rational};

fn real(r: Rational) -> ComplexExact {
    ComplexExact::real(r)
}

fn external(mu: Vec<ComplexExact>) -> MomentSequence<ComplexExact> {
    MomentSequence::new(mu, ModelTag::External)
}

#[test]
fn gaussian_moments_give_bc_n_equal_n() {
    // μ_{2k} = (2k-1)!!
    let mut mu = Vec::new();
    let mut dfact = Integer::from(1);
    for k in 0..=24u32 {
        if k % 2 == 1 {
            mu.push(real(Rational::new()));
        } else {
            if k > 0 {
                dfact *= k - 1;
            }
            mu.push(real(Rational::from(dfact.clone())));
        }
    }
    let ws = from_moments_det(&external(mu), 12).unwrap();
    for n in 1..=12 {
        assert_eq!(ws.bc[n], ComplexExact::from_i64(n as i64, ()));
    }
}

#[test]
fn toy_coefficients_match_brute_force_determinants() {
    let p = ToyParams::new(Rational::from(1), Rational::from((1, 6))).unwrap();
    let m = toy_moments_formula(&p, 16);
    let ws = from_moments_det(&m, 8).unwrap();
    let oracle = bc_by_brute_force(&m.mu, 8);
    for n in 1..=8 {
        assert_eq!(ws.bc[n], oracle[n], "n {n}");
    }
}

#[test]
fn two_point_measure_degenerates_at_two() {
    let mu = (0..8).map(|n| real(Rational::from(if n % 2 == 0 { 1 } else { 0 }))).collect();
    let m = external(mu);
    assert!(matches!(from_moments_det(&m, 3), Err(Error::MomentDegeneracy { index: 2 })));
    let ws = from_moments_det(&m, 1).unwrap();
    assert_eq!(ws.bc[1], ComplexExact::one(()));
}

#[test]
fn float_path_tracks_exact_path() {
    let p = ToyParams::new(Rational::from(1), Rational::from((1, 4))).unwrap();
    let m = toy_moments_formula(&p, 40);
    let exact = from_moments_det(&m, 20).unwrap();
    let big = m.map(|x| ComplexBig::from_rational(&x.re, &x.im, 1024));
    let float = from_moments_det(&big, 20).unwrap();
    for n in 1..=20 {
        let e = ComplexBig::from_rational(&exact.bc[n].re, &exact.bc[n].im, 1024);
        assert!(rel_diff(&e, &float.bc[n]) < 1e-200, "n {n}");
    }
}

#[test]
fn ladder_result_is_stable_against_higher_precision() {
    let p = SykParams::new(500.0, 1.0, 0.3).unwrap();
    let ws = adaptive_precision_run(&SykGenerator { params: p.clone() }, 24, LadderOptions::default()).unwrap();
    assert!(ws.ladder.len() >= 2);
    let reference = from_moments_det(&syk_moments(&p, 48, 8192).unwrap(), 24).unwrap();
    for n in 1..=24 {
        assert!(rel_diff(&ws.bc[n], &reference.bc[n]) < 1e-10, "n {n}");
    }
}

#[test]
fn ladder_cap_is_an_error() {
    let p = SykParams::new(500.0, 1.0, 0.3).unwrap();
    let opts = LadderOptions { start_bits: 64, cap_bits: 64, target_digits: 10 };
    assert!(matches!(
        adaptive_precision_run(&SykGenerator { params: p }, 10, opts),
        Err(Error::LadderCap { .. })
    ));
}

/// Moments of `Σ_k w_k δ(x - x_k)` with distinct nodes.
fn discrete(nodes: &[(i32, u32)], order: usize) -> Vec<ComplexExact> {
    (0..=order)
        .map(|n| {
            let mut acc = Rational::new();
            for &(x, w) in nodes {
                acc += Rational::from(Integer::from(x).pow(n as u32)) * Rational::from((w, 7));
            }
            real(acc)
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn determinant_and_table_algorithms_agree(
        nodes in prop::collection::btree_map(-6i32..7, 1u32..9, 6..9)
    ) {
        let nodes: Vec<_> = nodes.into_iter().collect();
        let n = 5;
        let m = external(discrete(&nodes, 2 * n));
        let det = from_moments_det(&m, n).unwrap();
        let rec = from_moments_recursive(&m, n).unwrap();
        for k in 1..=n {
            prop_assert_eq!(&det.bc[k], &rec.bc[k]);
            // a positive measure has positive recurrence coefficients
            prop_assert!(det.bc[k].re > 0 && det.bc[k].im == 0);
        }
    }

    #[test]
    fn measure_with_few_points_degenerates(nodes in prop::collection::btree_map(-6i32..7, 1u32..9, 1..5)) {
        let nodes: Vec<_> = nodes.into_iter().collect();
        let support = nodes.len();
        let m = external(discrete(&nodes, 2 * support + 2));
        let err = from_moments_det(&m, support + 1).unwrap_err();
        prop_assert!(matches!(err, Error::MomentDegeneracy { index } if index == support), "{:?}", err);
    }
}
