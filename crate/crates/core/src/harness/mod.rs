// Copyright 2026 dds-iswap Contributors
// SPDX-License-Identifier: Apache-2.0

//! Run configuration, seed derivation, file export and the CLI verbs.
//!
//! Every stage seed is `sub_seed(master, stage_name, index)`: the first 8
//! bytes (little endian) of SHA-256 over the master seed, the stage name, a
//! zero byte and the index.

mod commands;
mod config;
mod demo;
mod export;
mod seeds;

pub use commands::{
    cmd_calibrate, cmd_demo_phase, cmd_rb, cmd_spectroscopy, cmd_tomo, exit_code, load_record, OUT_DIR_ENV, RECORD_FILE,
};
pub use config::{DemoConfig, RunConfig, SpectroscopyConfig, TomoConfig};
pub use demo::{averaged_gate, phase_demo, repetition_starts, AveragedGate, Preparation, DEMO_PREPARATIONS};
pub use export::{fmt_g9, write_csv, write_meta, CsvTable};
pub use seeds::{sha256_hex, sub_seed};
