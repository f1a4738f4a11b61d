// Copyright 2026 dds-iswap Contributors
// SPDX-License-Identifier: Apache-2.0

//! Phase-coherent direct-digital-synthesis control of a parametric iSWAP gate.
//!
//! The crate is organized bottom-up:
//!
//! - [`quantum`]: exact two-qubit linear algebra (states, the parametric
//!   exchange unitary family, Pauli observables, Kraus channels, fidelities).
//! - [`dds`]: a multi-port NCO + IF sequencing engine on a 2 ns event grid
//!   with sysref synchronization and exact phase bookkeeping.
//! - [`device`]: a simulated two-transmon device with a flux-tunable coupler,
//!   spectroscopy responses, a master-equation integrator and shot readout.
//! - [`compiler`]: lowers native gates (X90, virtual Z, iSWAP) onto port
//!   schedules with frame tracking.
//! - [`tomography`], [`calibration`], [`benchmarking`]: the experiment layer.
//! - [`harness`]: configuration, seeding, file formats and the CLI commands.

pub mod benchmarking;
pub mod calibration;
pub mod compiler;
pub mod dds;
pub mod device;
pub mod error;
pub mod experiment;
pub mod fit;
pub mod grid;
pub mod harness;
pub mod quantum;
pub mod tomography;

pub use error::{Error, Result};
