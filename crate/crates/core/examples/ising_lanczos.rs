// SPDX-License-Identifier: Apache-2.0

//! Bi-Lanczos for the dissipative Ising chain and the point where the
//! coefficients leave the closed-system curve.

use opgrowth::lindblad::{ApplyLimits, IsingParams};
use opgrowth::pipeline::{ising_lanczos, ising_np};

fn main() -> opgrowth::Result<()> {
    let depth = 20;
    let prec = 1024;
    let closed = ising_lanczos(&IsingParams::default(), depth, prec, ApplyLimits::default())?;
    let closed_bc = closed.bc_c64();

    for eta in [0.1, 0.2, 0.4] {
        let data = ising_lanczos(&IsingParams::with_eta(eta)?, depth, prec, ApplyLimits::default())?;
        let bc = data.bc_c64();
        let np = ising_np(&bc, &closed_bc, 1.0)?;
        println!("eta = {eta}  N_p = {np:?}  breakdown = {:?}", data.breakdown);
        println!("   n    |sqrt(bc)|   closed");
        for n in 1..bc.len() {
            println!("  {n:2}  {:10.5}  {:10.5}", bc[n].norm().sqrt(), closed_bc[n].norm().sqrt());
        }
    }
    Ok(())
}
