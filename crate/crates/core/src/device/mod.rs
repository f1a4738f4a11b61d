// Copyright 2026 dds-iswap Contributors
// SPDX-License-Identifier: Apache-2.0

//! Simulated device: two fixed-frequency transmons joined by a flux-tunable
//! coupler.
//!
//! The coupler is adiabatically eliminated. Its AC flux modulation near the
//! qubit difference frequency appears as an exchange rate `g_eff(t)` and as
//! drive-induced qubit frequency shifts proportional to the squared
//! modulation amplitude. Evolution happens in the frame rotating at the bare
//! qubit frequencies, referenced to absolute time t = 0.

mod config;
mod evolve;
mod readout;
mod spectroscopy;

pub use config::DeviceConfig;
pub use evolve::{
    controls, demodulate, evolve, evolve_checkpoints, evolve_with, hamiltonian, propagator, Control,
    DriveWaveforms, Integrator, Noise, SimResult,
};
pub use readout::{measure, measure_with, readout_probabilities, ReadoutCounts};
pub use spectroscopy::{
    coupler_frequency, dressed_pair, qubit_response, resonator_response, DressedMode, SpectroscopySweep,
};
