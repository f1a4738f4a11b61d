// Copyright 2026 dds-iswap Contributors
// SPDX-License-Identifier: Apache-2.0

use crate::quantum::Qubit;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Physical parameters of the two-qubit device. Frequencies in Hz, times in s.
///
/// The defaults are synthetic: they are chosen so that the calibration
/// pipeline lands on the published operating point (3.775 V bias, 23.6 %
/// coupler amplitude, 527.05 MHz drive, 290 ns gate) and are otherwise
/// ordinary values for fixed-frequency transmons.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DeviceConfig {
    pub w_q1: f64,
    pub w_q2: f64,
    /// Coupler frequency at zero flux.
    pub w_c0: f64,
    /// Volts per flux quantum.
    pub flux_period_v: f64,
    /// Bias voltage at zero flux.
    pub v_offset: f64,
    pub g_qc: f64,
    pub g_rc: f64,
    pub w_r1: f64,
    pub w_r2: f64,
    /// Resonator linewidth used by the spectroscopy response.
    pub resonator_linewidth: f64,
    /// Qubit linewidth used by the two-tone response.
    pub qubit_linewidth: f64,
    /// Rabi frequency per unit qubit-drive amplitude.
    pub rabi_rate_per_unit: f64,
    /// Exchange rate g_eff per unit coupler amplitude.
    pub swap_rate_per_unit: f64,
    /// Qubit frequency shift per squared unit coupler amplitude.
    pub stark_coeff_q1: f64,
    pub stark_coeff_q2: f64,
    pub t1_q1: f64,
    pub t1_q2: f64,
    pub t2_q1: f64,
    pub t2_q2: f64,
    pub readout_assignment_error: f64,
}

impl Default for DeviceConfig {
    fn default() -> Self {
        Self {
            w_q1: 4.800e9,
            w_q2: 4.272_45e9,
            // 5.4 GHz at a quarter flux quantum
            w_c0: 5.4e9 / 0.5f64.powf(0.25),
            flux_period_v: 5.0,
            v_offset: 2.525,
            g_qc: 80e6,
            g_rc: 40e6,
            w_r1: 6.0e9,
            w_r2: 6.2e9,
            resonator_linewidth: 4e6,
            qubit_linewidth: 4e6,
            rabi_rate_per_unit: 50e6,
            swap_rate_per_unit: 1.0 / (2.0 * 290e-9 * 0.236),
            stark_coeff_q1: -0.30e6 / (0.236 * 0.236),
            stark_coeff_q2: 0.20e6 / (0.236 * 0.236),
            t1_q1: 30e-6,
            t1_q2: 30e-6,
            t2_q1: 20e-6,
            t2_q2: 20e-6,
            readout_assignment_error: 0.02,
        }
    }
}

impl DeviceConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |field: &str, reason: &str| Err(Error::Config {
            path: format!("device.{field}"),
            reason: reason.into(),
        });
        for (name, v) in [
            ("w_q1", self.w_q1),
            ("w_q2", self.w_q2),
            ("w_c0", self.w_c0),
            ("w_r1", self.w_r1),
            ("w_r2", self.w_r2),
            ("flux_period_v", self.flux_period_v),
            ("resonator_linewidth", self.resonator_linewidth),
            ("qubit_linewidth", self.qubit_linewidth),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return bad(name, "must be positive");
            }
        }
        for (name, v) in [
            ("g_qc", self.g_qc),
            ("g_rc", self.g_rc),
            ("rabi_rate_per_unit", self.rabi_rate_per_unit),
            ("swap_rate_per_unit", self.swap_rate_per_unit),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return bad(name, "must be non-negative");
            }
        }
        for (name, v) in [
            ("v_offset", self.v_offset),
            ("stark_coeff_q1", self.stark_coeff_q1),
            ("stark_coeff_q2", self.stark_coeff_q2),
        ] {
            if !v.is_finite() {
                return bad(name, "must be finite");
            }
        }
        for q in Qubit::BOTH {
            let (t1, t2) = self.coherence(q);
            let n = q.index();
            if !(t1 > 0.0) {
                return bad(&format!("t1_q{n}"), "must be positive");
            }
            if !(t2 > 0.0) {
                return bad(&format!("t2_q{n}"), "must be positive");
            }
            if t2 > 2.0 * t1 {
                return bad(&format!("t2_q{n}"), "must not exceed 2·t1");
            }
        }
        if !(0.0..0.5).contains(&self.readout_assignment_error) {
            return bad("readout_assignment_error", "must lie in [0, 0.5)");
        }
        Ok(())
    }

    pub fn qubit_frequency(&self, q: Qubit) -> f64 {
        match q {
            Qubit::Q1 => self.w_q1,
            Qubit::Q2 => self.w_q2,
        }
    }

    pub fn stark_coeff(&self, q: Qubit) -> f64 {
        match q {
            Qubit::Q1 => self.stark_coeff_q1,
            Qubit::Q2 => self.stark_coeff_q2,
        }
    }

    /// (T1, T2) of one qubit.
    pub fn coherence(&self, q: Qubit) -> (f64, f64) {
        match q {
            Qubit::Q1 => (self.t1_q1, self.t2_q1),
            Qubit::Q2 => (self.t1_q2, self.t2_q2),
        }
    }

    /// Pure dephasing time from 1/T2 = 1/(2 T1) + 1/Tφ; infinite at T2 = 2 T1.
    pub fn t_phi(&self, q: Qubit) -> f64 {
        let (t1, t2) = self.coherence(q);
        let rate = 1.0 / t2 - 0.5 / t1;
        if rate <= 0.0 { f64::INFINITY } else { 1.0 / rate }
    }

    /// Bare difference frequency of the qubits.
    pub fn difference_frequency(&self) -> f64 {
        self.w_q1 - self.w_q2
    }

    /// Coupler-drive frequency that is resonant at coupler amplitude `a`.
    pub fn shifted_difference_frequency(&self, a: f64) -> f64 {
        self.difference_frequency() + (self.stark_coeff_q1 - self.stark_coeff_q2) * a * a
    }

    pub fn without_stark(mut self) -> Self {
        self.stark_coeff_q1 = 0.0;
        self.stark_coeff_q2 = 0.0;
        self
    }

    pub fn flux_quanta(&self, v_dc: f64) -> f64 {
        (v_dc - self.v_offset) / self.flux_period_v
    }

    pub fn bias_for_flux(&self, flux: f64) -> f64 {
        self.v_offset + flux * self.flux_period_v
    }
}
