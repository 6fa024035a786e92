// SPDX-License-Identifier: Apache-2.0

//! Hopping toy model with exact rational moments.

use opgrowth::moments::{toy_moments_formula, toy_moments_oracle, ToyParams};
use opgrowth::pipeline::{toy_lanczos, toy_np, toy_ratio};
use rug::Rational;

fn main() -> opgrowth::Result<()> {
    let p = ToyParams::new(Rational::from(1), Rational::from((1, 6)))?;
    let formula = toy_moments_formula(&p, 16);
    let oracle = toy_moments_oracle(&p, 16);
    println!("formula == transfer matrix up to mu_16: {}", formula.mu == oracle.mu);
    for n in [0, 2, 4, 6] {
        println!("  mu_{n} = {}", formula.mu[n]);
    }

    let ws = toy_lanczos(&p, 30)?;
    let bc = ws.bc_c64();
    for n in (1..bc.len()).step_by(4) {
        println!("  n = {n:2}  |sqrt(bc)| = {:.6}", bc[n].norm().sqrt());
    }
    println!("N_p = {:?}", toy_np(&bc, 6, 1.0)?);

    let r = toy_ratio(&p, 40)?;
    println!("first sign change of mu_eta/mu_0 at order {:?}", r.first_sign_change.map(|n| 2 * n));
    Ok(())
}
