// Copyright 2026 dds-iswap Contributors
// SPDX-License-Identifier: Apache-2.0

//! Two-qubit Clifford group and interleaved randomized benchmarking.
//!
//! The observable is the ground-state probability of each qubit separately
//! (two curves per run), not the joint |00⟩ probability.

mod decay;
mod group;
mod rb;
mod sequence;
mod tableau;

pub use decay::{fit_decay, gate_error, gate_error_with_uncertainty, DecayFit, GateError, DIMENSION};
pub use group::{CliffordElement, CliffordGroup, Generator, GROUP_ORDER};
pub use rb::{run_rb, CurveFit, FastModel, NoiseScope, RBConfig, RBResult, RbCurve, RbRecord, SpotCheck};
pub use sequence::{build_sequence, native_duration_ns, sequence_duration_ns, InterleavedGate, RbSequence};
pub use tableau::{pauli_of, Pauli, Tableau};
