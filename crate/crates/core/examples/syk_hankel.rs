// SPDX-License-Identifier: Apache-2.0

//! Large-q SYK: moments, Hankel coefficients and the deviation point.

use opgrowth::hankel::LadderOptions;
use opgrowth::moments::{syk_bc_closed_form, SykParams};
use opgrowth::pipeline::{syk_depth, syk_lanczos, syk_np};

fn main() -> opgrowth::Result<()> {
    let p = SykParams::new(1000.0, 1.0, 0.2)?;
    let depth = syk_depth(&p);
    let ws = syk_lanczos(&p, depth, LadderOptions::default())?;
    let bc = ws.bc_c64();
    println!("q = 1000, eta = 0.2, depth {depth}, ladder {:?}", ws.ladder);
    println!("   n     bc_n / n(n-1)    closed form");
    for n in (2..bc.len()).step_by(3) {
        let nn = (n * (n - 1)) as f64;
        println!("  {n:3}  {:14.6}  {:14.6}", bc[n].re / nn, syk_bc_closed_form(&p, n) / nn);
    }
    let np = syk_np(&bc, &p, 1.0)?;
    if let Some(n) = np {
        println!("N_p = {n}, ln(q)/(2 beta) = {:.2}", p.q_f64().ln() / (2.0 * p.beta()));
    }
    Ok(())
}
