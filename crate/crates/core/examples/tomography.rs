// Copyright 2026 dds-iswap Contributors
// SPDX-License-Identifier: Apache-2.0

//! Nine-setting state tomography after the calibrated iSWAP, with T1/T2 on
//! and sampled shots.
//!
//! `cargo run --example tomography -- [prep]` (00, 01, 10, 11, superpos_a, superpos_b)

use dds_iswap::calibration::{Bench, CalibrationRecord};
use dds_iswap::compiler::{ideal_unitary, EngineConfig, Gate};
use dds_iswap::device::{DeviceConfig, Noise};
use dds_iswap::harness::Preparation;
use dds_iswap::quantum::{apply, state_fidelity, DensityMatrix, Qubit};
use dds_iswap::tomography::{bloch_vector, reconstruct, run_settings, TomographySetting};

fn main() -> dds_iswap::Result<()> {
    let prep: Preparation = std::env::args().nth(1).as_deref().unwrap_or("superpos_a").parse()?;
    let dev = DeviceConfig::default();
    let record = CalibrationRecord::from_model(&dev, 3.775, 0.236, 290);
    let bench = Bench::new(dev.clone(), EngineConfig::default(), Noise::On);
    let exp = bench.experiment(record.gate_params(&bench.device, &bench.engine)?)?;
    let mut gates = prep.gates();
    gates.push(Gate::Iswap);

    let outcomes = run_settings(&exp, &gates, &TomographySetting::all(), Some(10_000), 1, 0)?;
    let rho = reconstruct(&outcomes, dev.readout_assignment_error)?;
    let ideal = apply(&ideal_unitary(&gates), &DensityMatrix::basis(0, 0));
    println!("{prep} → iSWAP");
    for r in 0..4 {
        let row: Vec<String> = (0..4).map(|c| format!("{:+.3}{:+.3}i", rho.matrix()[(r, c)].re, rho.matrix()[(r, c)].im)).collect();
        println!("  {}", row.join("  "));
    }
    for q in Qubit::BOTH {
        let v = bloch_vector(&rho, q);
        println!("{q:?}: x {:+.3} y {:+.3} z {:+.3} |v| {:.3}", v.x, v.y, v.z, v.norm());
    }
    println!("fidelity to ideal {:.4}", state_fidelity(&rho, &ideal)?);
    Ok(())
}
