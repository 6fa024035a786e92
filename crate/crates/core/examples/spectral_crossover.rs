// SPDX-License-Identifier: Apache-2.0

//! Spectral function of the resummed SYK correlator at q = 4.

use opgrowth::moments::SykParams;
use opgrowth::spectral::{log_grid, phi, CorrelatorSpec};

fn main() -> opgrowth::Result<()> {
    let grid = log_grid(0.5, 40.0, 120)?;
    let p = SykParams::new(4.0, 1.0, 1e-3)?;
    let curve = phi(&CorrelatorSpec::SykResummed(p), &grid)?;
    for (w, f) in curve.omega.iter().zip(&curve.phi).step_by(10) {
        println!("  omega {w:8.3}  phi {f:.6e}  eta/(q w^2) {:.6e}", curve.tail_coefficient / (w * w));
    }
    println!("crossover formula {:?}", curve.omega_star_formula);
    match curve.omega_star_fit() {
        Some(w) => println!("crossover fit     {w:.3}"),
        None => println!("no crossover on this grid"),
    }
    Ok(())
}
