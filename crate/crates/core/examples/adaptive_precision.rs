// SPDX-License-Identifier: Apache-2.0

//! Hankel coefficients lose digits quickly; the ladder doubles the
//! working precision until two rungs agree.

use opgrowth::hankel::{adaptive_precision_run, from_moments_det, LadderOptions};
use opgrowth::moments::{syk_moments, SykParams};
use opgrowth::pipeline::SykGenerator;
use opgrowth::scalar::rel_diff;

fn main() -> opgrowth::Result<()> {
    let p = SykParams::new(500.0, 1.0, 0.3)?;
    let n = 60;
    let hi = from_moments_det(&syk_moments(&p, 2 * n, 2048)?, n)?;
    match from_moments_det(&syk_moments(&p, 2 * n, 64)?, n) {
        Ok(lo) => {
            for k in [5, 15, 30, 60] {
                println!("n = {k:2}: 64 vs 2048 bits differ by {:.1e}", rel_diff(&lo.bc[k], &hi.bc[k]));
            }
        }
        // all significant bits cancelled somewhere along the minors
        Err(e) => println!("64 bits: {e}"),
    }
    for bits in [128, 256] {
        let mid = from_moments_det(&syk_moments(&p, 2 * n, bits)?, n)?;
        println!("{bits} vs 2048 bits at n = {n}: {:.1e}", rel_diff(&mid.bc[n], &hi.bc[n]));
    }

    let opts = LadderOptions { start_bits: 256, ..LadderOptions::default() };
    let ws = adaptive_precision_run(&SykGenerator { params: p }, n, opts)?;
    println!("ladder {:?}, certified precision {:?}", ws.ladder, ws.precision_bits);
    Ok(())
}
