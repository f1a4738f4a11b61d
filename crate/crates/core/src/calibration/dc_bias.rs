// Copyright 2026 dds-iswap Contributors
// SPDX-License-Identifier: Apache-2.0

use crate::device::{coupler_frequency, DeviceConfig, SpectroscopySweep};
use crate::{Error, Result};

/// Smallest distance between the bare coupler and any fixed mode (both
/// qubits, both resonators), Hz.
pub fn bias_criterion(cfg: &DeviceConfig, v_dc: f64) -> f64 {
    let fc = coupler_frequency(cfg, v_dc);
    [cfg.w_q1, cfg.w_q2, cfg.w_r1, cfg.w_r2]
        .iter()
        .map(|f| (fc - f).abs())
        .fold(f64::INFINITY, f64::min)
}

#[derive(Debug, Clone)]
pub struct DcBiasResult {
    pub v_dc: f64,
    pub v_grid: Vec<f64>,
    /// Criterion per grid bias.
    pub criterion: Vec<f64>,
    pub resonator: Option<SpectroscopySweep>,
    pub qubit: Option<SpectroscopySweep>,
}

/// Bias maximizing [`bias_criterion`] over `v_grid`; ties go to the larger
/// |flux|. Spectroscopy maps are computed when frequency grids are given.
pub fn select_dc_bias(
    cfg: &DeviceConfig,
    v_grid: &[f64],
    spectroscopy: Option<(&[f64], &[f64])>,
) -> Result<DcBiasResult> {
    if v_grid.is_empty() {
        return Err(Error::invalid("empty DC bias sweep"));
    }
    let criterion: Vec<f64> = v_grid.iter().map(|&v| bias_criterion(cfg, v)).collect();
    let mut best = 0;
    for k in 1..v_grid.len() {
        let (c, b) = (criterion[k], criterion[best]);
        let tie = (c - b).abs() <= 1e-9 * b.abs().max(1.0);
        if (c > b && !tie) || (tie && cfg.flux_quanta(v_grid[k]).abs() > cfg.flux_quanta(v_grid[best]).abs()) {
            best = k;
        }
    }
    let (resonator, qubit) = match spectroscopy {
        Some((f_res, f_qubit)) => (
            Some(SpectroscopySweep::resonator(cfg, v_grid, f_res)?),
            Some(SpectroscopySweep::qubit(cfg, v_grid, f_qubit)?),
        ),
        None => (None, None),
    };
    Ok(DcBiasResult { v_dc: v_grid[best], v_grid: v_grid.to_vec(), criterion, resonator, qubit })
}
