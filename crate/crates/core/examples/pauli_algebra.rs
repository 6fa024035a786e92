// SPDX-License-Identifier: Apache-2.0

//! Pauli strings, translation-invariant sums and one Lindbladian step.

use opgrowth::lindblad::{apply, apply_adjoint, apply_dissipator, apply_unitary, IsingParams};
use opgrowth::opspace::{mul, PauliString, TIOperator};
use opgrowth::scalar::{ComplexExact, Scalar};

fn main() -> opgrowth::Result<()> {
    let p: PauliString = "X0 Z1".parse()?;
    let q: PauliString = "Y1 Z3".parse()?;
    let (phase, r) = mul(&p, &q);
    println!("({p}) * ({q}) = i^{} ({r})", phase.exponent());
    println!("anticommute: {}", p.anticommutes(&q));

    let o = TIOperator::<ComplexExact>::lattice_sum("X0".parse()?, ());
    let params = IsingParams::with_eta(0.1)?;
    let spec = params.spec();

    let show = |name: &str, v: &TIOperator<ComplexExact>| {
        println!("{name}:");
        for (s, c) in v.terms() {
            println!("  {c}  [{s}]");
        }
    };
    show("[H, X]", &apply_unitary(&spec, &o)?);
    show("L_d X", &apply_dissipator(&spec, &o)?);
    let lo = apply(&spec, &o)?;
    show("L X", &lo);
    show("L^dag X", &apply_adjoint(&spec, &o)?);

    let n = lo.norm_sqr();
    println!("(LX|LX) per site = {}", n.to_decimal(12).0);
    Ok(())
}
