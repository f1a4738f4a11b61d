// Copyright 2026 dds-iswap Contributors
// SPDX-License-Identifier: Apache-2.0

//! NCO start phases across repetitions: constant for a commensurate NCO,
//! drifting otherwise. Repeated windows are compared sample by sample.
//!
//! `cargo run --example dds_phase_coherence`

use dds_iswap::dds::{nco_commensurate, Freq, NcoConfig, PortId, PulseTemplate, SequencerState};
use std::sync::Arc;

fn main() -> dds_iswap::Result<()> {
    let period = 10_000;
    let port = PortId::new("coupler");
    let pulse = Arc::new(PulseTemplate::raised_cosine("swap", 290)?);
    for f in [527.0e6, 527.0e6 + 12_345.678] {
        let nco = Freq::from_hz(f);
        let mut s = SequencerState::new(period)?.with_port(port.clone(), NcoConfig::new(nco)).sysref_sync(0)?;
        s = s.set_if_frequency(&port, 0, Freq::from_hz(50e3))?;
        let reps = 5;
        for r in 0..reps {
            let t0 = r * period;
            if r > 0 {
                s = s.restart(t0)?;
            }
            s = s.schedule_pulse(&port, t0 + 100, pulse.clone(), 0.236)?;
        }
        println!("NCO {:.6} MHz, commensurate: {}", f * 1e-6, nco_commensurate(nco, period)?);
        let first = s.render(&port, 100, 390)?.analytic();
        for r in 0..reps {
            let t0 = r * period;
            let w = s.render(&port, t0 + 100, t0 + 390)?.analytic();
            let diff = w.iter().zip(&first).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            println!("  rep {r}: NCO phase {:+.4} rad, max sample difference to rep 0 {:.2e}", s.phase_at(&port, t0)?, diff);
        }
    }
    Ok(())
}
