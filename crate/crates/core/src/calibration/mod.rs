// Copyright 2026 dds-iswap Contributors
// SPDX-License-Identifier: Apache-2.0

//! iSWAP calibration: DC bias, amplitude/frequency sweep, duration/frequency
//! sweep, virtual-Z compensation from an iSWAP/−iSWAP echo, and the coupler
//! phase `η`.
//!
//! Stages run in that order. The virtual-Z stage comes before `η` because
//! the `η` score is taken on superposition states whose phases include the
//! Stark shift.

mod dc_bias;
mod phase;
mod pipeline;
mod record;
mod sweeps;

pub use dc_bias::{bias_criterion, select_dc_bias, DcBiasResult};
pub use phase::{calibrate_eta, calibrate_virtual_z, echo_phases, eta_candidates, score_eta, EtaScan, VirtualZResult};
pub use pipeline::{full_pipeline, PipelineOutput};
pub use record::{timestamp_now, CalibrationRecord};
pub use sweeps::{
    amp_freq_sweep, duration_freq_sweep, fit_rabi, rabi_swap_probability, select_amplitude, select_point,
    AmplitudeChoice, OperatingPoint, RabiFit, SweepResult2D,
};

use crate::compiler::{Compiler, EngineConfig, GateParams};
use crate::device::{measure_with, readout_probabilities, DeviceConfig, Integrator, Noise};
use crate::experiment::Experiment;
use crate::grid::Axis;
use crate::quantum::DensityMatrix;
use crate::{Error, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Sweep ranges and thresholds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CalibrationConfig {
    /// DC bias grid, volts.
    pub dc_bias: Axis,
    /// Coupler amplitudes (DAC fraction) of the amplitude/frequency sweep.
    pub amplitudes: Axis,
    /// Coupler frequencies of the amplitude/frequency sweep, Hz.
    pub amp_frequencies: Axis,
    pub amp_sweep_tau_ns: i64,
    /// Oscillations the on-resonance trace must complete at the chosen
    /// amplitude.
    pub min_oscillations: f64,
    pub min_contrast: f64,
    /// Pulse lengths of the duration/frequency sweep, ns.
    pub durations: Axis,
    pub duration_frequencies: Axis,
    pub eta_steps: usize,
    pub shots: u64,
    /// Exact probabilities instead of sampled shots.
    pub analytic: bool,
    pub noise: Noise,
}

impl Default for CalibrationConfig {
    fn default() -> Self {
        Self {
            dc_bias: Axis::new(2.0, 4.2, 0.005),
            amplitudes: Axis::new(0.10, 0.40, 0.004),
            amp_frequencies: Axis::new(524.55e6, 530.55e6, 0.1e6),
            amp_sweep_tau_ns: 2000,
            min_oscillations: 3.42,
            min_contrast: 0.8,
            durations: Axis::new(2.0, 600.0, 2.0),
            duration_frequencies: Axis::new(524.55e6, 530.55e6, 0.1e6),
            eta_steps: 36,
            shots: 1024,
            analytic: false,
            noise: Noise::On,
        }
    }
}

impl CalibrationConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |f: &str, r: String| Err(Error::Config { path: format!("calibration.{f}"), reason: r });
        for (name, axis) in [
            ("dc_bias", self.dc_bias),
            ("amplitudes", self.amplitudes),
            ("amp_frequencies", self.amp_frequencies),
            ("durations", self.durations),
            ("duration_frequencies", self.duration_frequencies),
        ] {
            if let Err(e) = axis.values() {
                return bad(name, e.to_string());
            }
        }
        if self.amplitudes.start < 0.0 || self.amplitudes.stop > 1.0 {
            return bad("amplitudes", "must lie in [0, 1]".into());
        }
        for (name, v) in [("durations.start", self.durations.start), ("durations.step", self.durations.step)] {
            if v <= 0.0 || v.fract() != 0.0 || v as i64 % 2 != 0 {
                return bad(name, "must be a positive multiple of 2 ns".into());
            }
        }
        if self.amp_sweep_tau_ns <= 0 || self.amp_sweep_tau_ns % 2 != 0 {
            return bad("amp_sweep_tau_ns", "must be a positive multiple of 2".into());
        }
        if self.eta_steps < 3 {
            return bad("eta_steps", "need at least 3 phases".into());
        }
        if !self.analytic && self.shots == 0 {
            return bad("shots", "must be positive unless analytic".into());
        }
        Ok(())
    }

    pub fn sampling(&self, seed: u64) -> Sampling {
        Sampling { shots: if self.analytic { None } else { Some(self.shots) }, seed }
    }

    pub(crate) fn duration_grid(&self) -> Result<Vec<i64>> {
        Ok(self.durations.values()?.iter().map(|d| d.round() as i64).collect())
    }
}

/// Shot count (`None`: exact probabilities) and seed of one measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sampling {
    pub shots: Option<u64>,
    pub seed: u64,
}

impl Sampling {
    pub fn analytic() -> Self {
        Self { shots: None, seed: 0 }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }
}

/// Everything a stage needs to run circuits on the simulated device.
#[derive(Debug, Clone)]
pub struct Bench {
    pub device: DeviceConfig,
    pub engine: EngineConfig,
    pub noise: Noise,
    pub integrator: Integrator,
}

impl Bench {
    pub fn new(device: DeviceConfig, engine: EngineConfig, noise: Noise) -> Self {
        Self { device, engine, noise, integrator: Integrator::default() }
    }

    /// Gate parameters with only the single-qubit pulses set.
    pub fn base_params(&self) -> Result<GateParams> {
        GateParams::with_x90(&self.device, self.engine.x90_duration_ns)
    }

    pub fn experiment(&self, params: GateParams) -> Result<Experiment> {
        let c = Compiler::new(&self.device, self.engine, params)?;
        let mut e = Experiment::new(self.device.clone(), c, self.noise);
        e.integrator = self.integrator;
        Ok(e)
    }
}

/// Excited-state population of (Q1, Q2), from exact readout probabilities
/// or from sampled shots.
pub fn measured_populations(rho: &DensityMatrix, assignment_error: f64, sampling: Sampling) -> Result<[f64; 2]> {
    let p = match sampling.shots {
        None => readout_probabilities(rho, assignment_error),
        Some(n) => {
            let mut rng = ChaCha8Rng::seed_from_u64(sampling.seed);
            measure_with(rho, n, assignment_error, &mut rng)?.fractions()
        }
    };
    Ok([p[2] + p[3], p[1] + p[3]])
}
