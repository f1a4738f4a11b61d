// Copyright 2026 dds-iswap Contributors
// SPDX-License-Identifier: Apache-2.0

use super::engine::PortId;
use super::phase::{Cycles, Freq};
use crate::quantum::C64;

/// Rendered IF-domain samples of one port at 1 GS/s.
///
/// `samples` carry the envelope, the IF carrier and the virtual-Z frame. The
/// NCO carrier is metadata: sample `k` of the full analytic signal is
/// `samples[k] · exp(i(2π(carrier_cycles_t0 + f_nco·k ns) + reference))`.
#[derive(Debug, Clone, PartialEq)]
pub struct RenderedWaveform {
    pub port: PortId,
    pub t0_ns: i64,
    pub samples: Vec<C64>,
    pub carrier_frequency: Freq,
    /// NCO phase at `t0` relative to the governing sync, exact.
    pub carrier_cycles_t0: Cycles,
    pub carrier_reference_phase: f64,
    /// Set when any summed sample exceeded full scale and was clipped.
    pub clipped: bool,
}

impl RenderedWaveform {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn t1_ns(&self) -> i64 {
        self.t0_ns + self.samples.len() as i64
    }

    /// NCO carrier phase (radians, not wrapped to a fixed range) at sample `k`.
    pub fn carrier_phase(&self, k: usize) -> f64 {
        (self.carrier_cycles_t0 + self.carrier_frequency.advance(k as i64)).radians()
            + self.carrier_reference_phase
    }

    /// Samples `[k0, k1)` as a waveform of their own.
    pub fn slice(&self, k0: usize, k1: usize) -> Self {
        Self {
            port: self.port.clone(),
            t0_ns: self.t0_ns + k0 as i64,
            samples: self.samples[k0..k1].to_vec(),
            carrier_frequency: self.carrier_frequency,
            carrier_cycles_t0: self.carrier_cycles_t0 + self.carrier_frequency.advance(k0 as i64),
            carrier_reference_phase: self.carrier_reference_phase,
            clipped: self.clipped,
        }
    }

    /// Full analytic signal with the NCO carrier applied.
    pub fn analytic(&self) -> Vec<C64> {
        self.samples
            .iter()
            .enumerate()
            .map(|(k, s)| s * C64::from_polar(1.0, self.carrier_phase(k)))
            .collect()
    }
}

impl RenderedWaveform {
    /// Waveform built from raw IF samples with the NCO synced at t = 0.
    pub fn from_samples(port: PortId, t0_ns: i64, samples: Vec<C64>, carrier: Freq) -> Self {
        Self {
            port,
            t0_ns,
            samples,
            carrier_frequency: carrier,
            carrier_cycles_t0: carrier.advance(t0_ns),
            carrier_reference_phase: 0.0,
            clipped: false,
        }
    }
}
