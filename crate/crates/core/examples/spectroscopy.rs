// Copyright 2026 dds-iswap Contributors
// SPDX-License-Identifier: Apache-2.0

//! Resonator and two-tone maps vs DC bias, the avoided crossings, and the
//! chosen operating bias.
//!
//! `cargo run --example spectroscopy`

use dds_iswap::calibration::select_dc_bias;
use dds_iswap::device::{coupler_frequency, DeviceConfig, SpectroscopySweep};
use dds_iswap::grid::Axis;

fn main() -> dds_iswap::Result<()> {
    let dev = DeviceConfig::default();
    let v = Axis::new(2.0, 4.2, 0.1).values()?;
    let res = SpectroscopySweep::resonator(&dev, &v, &Axis::new(5.90e9, 6.30e9, 1e6).values()?)?;
    let qub = SpectroscopySweep::qubit(&dev, &v, &Axis::new(4.20e9, 4.90e9, 2e6).values()?)?;
    println!("{:>6} {:>10}  {:<28} {}", "V", "f_c (GHz)", "resonator dips (GHz)", "qubit dips (GHz)");
    let ghz = |d: Vec<f64>| d.iter().map(|f| format!("{:.3}", f * 1e-9)).collect::<Vec<_>>().join(" ");
    for (i, &x) in v.iter().enumerate() {
        println!("{x:>6.2} {:>10.3}  {:<28} {}", coupler_frequency(&dev, x) * 1e-9, ghz(res.dips(i, 0.5)), ghz(qub.dips(i, 0.5)));
    }
    let grid = Axis::new(2.0, 4.2, 0.005).values()?;
    let pick = select_dc_bias(&dev, &grid, None)?;
    println!("operating bias {:.3} V ({:.3} flux quanta)", pick.v_dc, dev.flux_quanta(pick.v_dc));
    Ok(())
}
