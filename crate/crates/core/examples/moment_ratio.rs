// SPDX-License-Identifier: Apache-2.0

//! Dissipative to closed moment ratios; for SYK they barely depend on q.

use opgrowth::moments::{MomentOptions, SykParams};
use opgrowth::lindblad::IsingParams;
use opgrowth::pipeline::{ising_ratio, syk_ratio};

fn main() -> opgrowth::Result<()> {
    let order = 16;
    for q in [500.0, 5000.0] {
        let r = syk_ratio(&SykParams::new(q, 1.0, 0.1)?, order, 512)?;
        let shown: Vec<String> = r.ratio.iter().map(|x| format!("{x:.4}")).collect();
        println!("syk q={q}: {}", shown.join(" "));
    }
    let r = ising_ratio(&IsingParams::with_eta(0.1)?, order, 512, MomentOptions::default())?;
    let shown: Vec<String> = r.ratio.iter().map(|x| format!("{x:.4}")).collect();
    println!("ising:     {}", shown.join(" "));
    println!("ising sign change: {:?}", r.first_sign_change);
    Ok(())
}
