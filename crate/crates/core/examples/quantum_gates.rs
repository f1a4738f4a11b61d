// Copyright 2026 dds-iswap Contributors
// SPDX-License-Identifier: Apache-2.0

//! The parametric iSWAP family, its virtual-Z covariance, and noise channels.
//!
//! `cargo run --example quantum_gates`

use dds_iswap::quantum::{
    apply, depolarizing_channel, iswap_family, relaxation_channel, state_fidelity, virtual_z_unitary, DensityMatrix,
    StateVector, C64,
};
use std::f64::consts::PI;

fn main() -> dds_iswap::Result<()> {
    let u = iswap_family(PI, 0.0);
    println!("iSWAP =");
    for r in 0..4 {
        let row: Vec<String> = (0..4).map(|c| format!("{:>+5.2}{:+.2}i", u.matrix()[(r, c)].re, u.matrix()[(r, c)].im)).collect();
        println!("  {}", row.join("  "));
    }

    let (theta, eta) = (1.3, 0.4);
    let back = &iswap_family(theta, eta) * &iswap_family(-theta, eta);
    println!("U(θ,η)·U(−θ,η) distance from identity: {:.1e}", back.distance_up_to_phase(&dds_iswap::quantum::Unitary::identity()));

    // a drive phase is a pair of opposite Z frames
    let d = -eta / 2.0;
    let framed = &(&virtual_z_unitary(d, -d) * &iswap_family(theta, 0.0)) * &virtual_z_unitary(-d, d);
    println!("η as Z frames: distance {:.1e}", framed.distance_up_to_phase(&iswap_family(theta, eta)));

    let s = std::f64::consts::FRAC_1_SQRT_2;
    let psi = StateVector::normalized([C64::new(s, 0.0), C64::new(0.0, s), C64::new(0.0, 0.0), C64::new(0.0, 0.0)])?;
    let rho = psi.to_density();
    let out = apply(&u, &rho);
    println!("(|00⟩ + i|01⟩)/√2 → populations {:?}", out.populations().map(|p| (p * 1000.0).round() / 1000.0));

    let noisy = depolarizing_channel(0.02)?.apply(&out);
    println!("after 2% depolarizing: fidelity {:.4}, purity {:.4}", state_fidelity(&noisy, &out)?, noisy.purity());
    let decayed = relaxation_channel(290e-9, 30e-6, 40e-6, 1)?.apply(&DensityMatrix::basis(1, 0));
    println!("|10⟩ after 290 ns of T1 = 30 µs: P(1 on Q1) = {:.5}", decayed.populations()[2]);
    Ok(())
}
