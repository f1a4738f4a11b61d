// Copyright 2026 dds-iswap Contributors
// SPDX-License-Identifier: Apache-2.0

//! Interleaved randomized benchmarking of the iSWAP with a known injected
//! depolarizing error on top of T1/T2.
//!
//! `cargo run --example interleaved_rb -- [injected error]`

use dds_iswap::benchmarking::{run_rb, CliffordGroup, NoiseScope, RBConfig};
use dds_iswap::calibration::{Bench, CalibrationRecord};
use dds_iswap::compiler::EngineConfig;
use dds_iswap::device::{DeviceConfig, Noise};
use std::time::Instant;

fn main() -> dds_iswap::Result<()> {
    let injected = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0.02);
    let dev = DeviceConfig::default();
    let record = CalibrationRecord::from_model(&dev, 3.775, 0.236, 290);
    let bench = Bench::new(dev, EngineConfig::default(), Noise::On);
    let cfg = RBConfig { seed: 7, iswap_depolarizing: injected, iswap_noise_scope: NoiseScope::Interleaved, ..RBConfig::default() };
    let t = Instant::now();
    let res = run_rb(&cfg, &bench, &record, CliffordGroup::global())?;
    println!("{} sequences in {:.2} s", res.records.len(), t.elapsed().as_secs_f64());

    let il = res.interleaved.as_ref().expect("interleaved curve");
    println!("{:>6} {:>9} {:>9} {:>9} {:>9}", "m", "ref Q1", "ref Q2", "int Q1", "int Q2");
    for (k, m) in res.depths.iter().enumerate() {
        println!(
            "{m:>6} {:>9.4} {:>9.4} {:>9.4} {:>9.4}",
            res.reference.means[0][k], res.reference.means[1][k], il.means[0][k], il.means[1][k]
        );
    }
    for q in 0..2 {
        let (r, i) = (res.reference.fits[q].fit.unwrap(), il.fits[q].fit.unwrap());
        let e = res.gate_error[q].unwrap();
        println!(
            "Q{}: p_ref {:.4}±{:.4}, p_int {:.4}±{:.4}, iSWAP error {:.4}±{:.4}",
            q + 1, r.p, r.p_err, i.p, i.p_err, e.value, e.std_error
        );
    }
    println!("(T1/T2 adds to the injected {injected}; waveform spot check deviation {:.4})",
        res.spot_checks.iter().map(|s| s.deviation()).fold(0.0, f64::max));
    Ok(())
}
