// Copyright 2026 dds-iswap Contributors
// SPDX-License-Identifier: Apache-2.0

use super::DeviceConfig;
use crate::harness::CsvTable;
use crate::{Error, Result};
use std::f64::consts::PI;

/// Coupler frequency under a DC bias: `w_c0·sqrt(|cos(π Φ/Φ0)|)`.
pub fn coupler_frequency(cfg: &DeviceConfig, v_dc: f64) -> f64 {
    cfg.w_c0 * (PI * cfg.flux_quanta(v_dc)).cos().abs().sqrt()
}

/// One normal mode of a fixed mode hybridized with the coupler.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DressedMode {
    pub frequency: f64,
    /// Fraction of the fixed mode in this normal mode.
    pub weight: f64,
}

/// Normal modes of `[[f_fixed, g], [g, f_coupler]]`, upper branch first.
pub fn dressed_pair(f_fixed: f64, f_coupler: f64, g: f64) -> [DressedMode; 2] {
    let mean = 0.5 * (f_fixed + f_coupler);
    let half = 0.5 * (f_fixed - f_coupler);
    let r = (g * g + half * half).sqrt();
    let w_upper = if r == 0.0 { 0.5 } else { 0.5 * (1.0 + half / r) };
    [
        DressedMode { frequency: mean + r, weight: w_upper },
        DressedMode { frequency: mean - r, weight: 1.0 - w_upper },
    ]
}

fn lorentzian(f: f64, center: f64, fwhm: f64) -> f64 {
    let hw = 0.5 * fwhm;
    hw * hw / ((f - center).powi(2) + hw * hw)
}

fn response(f_probe: f64, modes: &[f64], f_coupler: f64, g: f64, linewidth: f64) -> f64 {
    let mut out = 1.0;
    for &fm in modes {
        for m in dressed_pair(fm, f_coupler, g) {
            out *= 1.0 - m.weight * lorentzian(f_probe, m.frequency, linewidth);
        }
    }
    out
}

/// Transmission magnitude in `[0, 1]` of the two readout resonators, each
/// dressed by the coupler.
pub fn resonator_response(cfg: &DeviceConfig, f_probe: f64, v_dc: f64) -> f64 {
    let fc = coupler_frequency(cfg, v_dc);
    response(f_probe, &[cfg.w_r1, cfg.w_r2], fc, cfg.g_rc, cfg.resonator_linewidth)
}

/// Two-tone qubit response in `[0, 1]`, each qubit dressed by the coupler.
pub fn qubit_response(cfg: &DeviceConfig, f_probe: f64, v_dc: f64) -> f64 {
    let fc = coupler_frequency(cfg, v_dc);
    response(f_probe, &[cfg.w_q1, cfg.w_q2], fc, cfg.g_qc, cfg.qubit_linewidth)
}

/// A (bias × frequency) map, normalized to its own minimum and maximum.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectroscopySweep {
    pub v_dc: Vec<f64>,
    pub f_hz: Vec<f64>,
    /// `response[iv][jf]`.
    pub response: Vec<Vec<f64>>,
}

impl SpectroscopySweep {
    pub fn compute(
        v_dc: &[f64],
        f_hz: &[f64],
        point: impl Fn(f64, f64) -> f64,
    ) -> Result<Self> {
        if v_dc.is_empty() || f_hz.is_empty() {
            return Err(Error::invalid("empty spectroscopy sweep"));
        }
        let mut response: Vec<Vec<f64>> =
            v_dc.iter().map(|&v| f_hz.iter().map(|&f| point(f, v)).collect()).collect();
        let (lo, hi) = response.iter().flatten().fold((f64::MAX, f64::MIN), |(lo, hi), &x| {
            (lo.min(x), hi.max(x))
        });
        let span = hi - lo;
        for row in &mut response {
            for x in row.iter_mut() {
                *x = if span > 0.0 { (*x - lo) / span } else { 1.0 };
            }
        }
        Ok(Self { v_dc: v_dc.to_vec(), f_hz: f_hz.to_vec(), response })
    }

    pub fn resonator(cfg: &DeviceConfig, v_dc: &[f64], f_hz: &[f64]) -> Result<Self> {
        Self::compute(v_dc, f_hz, |f, v| resonator_response(cfg, f, v))
    }

    pub fn qubit(cfg: &DeviceConfig, v_dc: &[f64], f_hz: &[f64]) -> Result<Self> {
        Self::compute(v_dc, f_hz, |f, v| qubit_response(cfg, f, v))
    }

    /// Frequencies of local minima below `threshold` in one bias row.
    pub fn dips(&self, iv: usize, threshold: f64) -> Vec<f64> {
        let row = &self.response[iv];
        (1..row.len().saturating_sub(1))
            .filter(|&j| row[j] < threshold && row[j] <= row[j - 1] && row[j] < row[j + 1])
            .map(|j| self.f_hz[j])
            .collect()
    }

    pub fn to_table(&self) -> CsvTable {
        let mut t = CsvTable::new(&["v_dc", "f_hz", "response"]);
        for (iv, &v) in self.v_dc.iter().enumerate() {
            for (jf, &f) in self.f_hz.iter().enumerate() {
                t.push(vec![v, f, self.response[iv][jf]]);
            }
        }
        t
    }
}
