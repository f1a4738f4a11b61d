// Copyright 2026 dds-iswap Contributors
// SPDX-License-Identifier: Apache-2.0

//! Repetition-averaged Bloch vectors with commensurate and non-commensurate
//! NCOs. Phase-sensitive outputs survive averaging only in the first case.
//!
//! `cargo run --example phase_demo -- [repetitions]`

use dds_iswap::calibration::{Bench, CalibrationRecord};
use dds_iswap::compiler::EngineConfig;
use dds_iswap::device::{DeviceConfig, Noise};
use dds_iswap::harness::{phase_demo, DemoConfig};

fn main() -> dds_iswap::Result<()> {
    let reps = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(200);
    let dev = DeviceConfig::default();
    let record = CalibrationRecord::from_model(&dev, 3.775, 0.236, 290);
    let bench = Bench::new(dev, EngineConfig::default(), Noise::On);
    let cfg = DemoConfig { repetitions: reps, ..DemoConfig::default() };
    println!("{:<14} {:<12} {:>24} {:>24} {:>8}", "regime", "prep", "Q1 (x, y, z)", "Q2 (x, y, z)", "F");
    for r in phase_demo(&bench, &record, &cfg, &[true, false], 2026)? {
        let v = |i: usize| format!("({:+.2}, {:+.2}, {:+.2})", r.bloch[i].x, r.bloch[i].y, r.bloch[i].z);
        let regime = if r.commensurate { "commensurate" } else { "free-running" };
        println!("{regime:<14} {:<12} {:>24} {:>24} {:>8.3}", r.preparation.to_string(), v(0), v(1), r.fidelity);
    }
    Ok(())
}
