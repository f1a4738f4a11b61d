// Copyright 2026 dds-iswap Contributors
// SPDX-License-Identifier: Apache-2.0

//! Full calibration on the default device: DC bias, amplitude, frequency,
//! duration, virtual Z and coupler phase.
//!
//! `cargo run --example calibration_pipeline -- [out_dir] [--analytic]`

use dds_iswap::calibration::{full_pipeline, Bench, CalibrationConfig};
use dds_iswap::compiler::EngineConfig;
use dds_iswap::device::DeviceConfig;
use std::time::Instant;

fn main() -> dds_iswap::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let mut cal = CalibrationConfig::default();
    cal.analytic = args.iter().any(|a| a == "--analytic");
    let out = args.iter().find(|a| !a.starts_with("--"));

    let bench = Bench::new(DeviceConfig::default(), EngineConfig::default(), cal.noise);
    let t = Instant::now();
    let run = full_pipeline(&bench, &cal, 2026)?;
    let r = &run.record;
    println!("finished in {:.1} s", t.elapsed().as_secs_f64());
    println!("v_dc            {:.3} V", r.v_dc);
    println!(
        "amplitude       {:.3}  ({:.2} oscillations over {} ns, contrast {:.3})",
        r.amplitude, run.amplitude.oscillations, cal.amp_sweep_tau_ns, run.amplitude.contrast
    );
    println!("fitted rate     {:.4e} Hz/unit, resonance shift {:.1} kHz at the chosen amplitude",
        run.rabi_fit.rate_per_unit,
        (run.rabi_fit.resonance(r.amplitude) - run.rabi_fit.f0) * 1e-3);
    println!("drive frequency {:.4} MHz", r.drive_frequency * 1e-6);
    println!("duration        {} ns", r.duration);
    println!(
        "virtual Z       q1 {:+.2} deg, q2 {:+.2} deg (residual {:+.2} / {:+.2} deg)",
        r.vz_q1.to_degrees(),
        r.vz_q2.to_degrees(),
        run.virtual_z.residual_phase[0].to_degrees(),
        run.virtual_z.residual_phase[1].to_degrees()
    );
    println!("eta             {:+.2} deg (mean fidelity {:.4})", r.eta.to_degrees(), run.eta.best_score);
    if let Some(dir) = out {
        run.write(std::path::Path::new(dir))?;
        println!("wrote {dir}");
    }
    Ok(())
}
