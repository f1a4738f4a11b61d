// Copyright 2026 dds-iswap Contributors
// SPDX-License-Identifier: Apache-2.0

use clap::{Parser, Subcommand, ValueEnum};
use dds_iswap::benchmarking::InterleavedGate;
use dds_iswap::compiler::Gate;
use dds_iswap::harness::{
    cmd_calibrate, cmd_demo_phase, cmd_rb, cmd_spectroscopy, cmd_tomo, exit_code, load_record, Preparation, RunConfig,
    OUT_DIR_ENV, RECORD_FILE,
};
use dds_iswap::Result;
use std::path::PathBuf;
use std::process::ExitCode;

/// Phase-coherent DDS iSWAP experiment on a simulated device.
#[derive(Parser)]
#[command(name = "dds-iswap", version)]
struct Cli {
    /// Run configuration (TOML, or JSON by extension). Defaults apply when
    /// omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master seed, overriding the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Output directory, overriding the environment and the config.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Calibration record to use (default: <out>/calibration_record.json).
    #[arg(long, global = true)]
    record: Option<PathBuf>,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Resonator and two-tone maps vs DC bias.
    Spectroscopy,
    /// Full gate calibration.
    Calibrate,
    /// Repetition-averaged Bloch vectors with and without NCO commensurability.
    DemoPhase {
        /// Run only one regime.
        #[arg(long)]
        commensurate: Option<bool>,
    },
    /// Interleaved randomized benchmarking.
    Rb {
        #[arg(long, value_enum)]
        interleave: Option<InterleaveArg>,
    },
    /// Two-qubit state tomography after a preparation and the gate.
    Tomo {
        /// 00, 01, 10, 11, superpos_a or superpos_b.
        #[arg(long)]
        prep: String,
        #[arg(long, value_enum, default_value = "iswap")]
        gate: InterleaveArg,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum InterleaveArg {
    Iswap,
    None,
}

fn run(cli: Cli) -> Result<()> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(n) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| dds_iswap::Error::Config { path: "--jobs".into(), reason: e.to_string() })?;
    }
    let out = cli
        .out
        .clone()
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| cfg.output_dir.clone());
    let record_path = cli.record.clone().unwrap_or_else(|| out.join(RECORD_FILE));
    let files = match cli.verb {
        Verb::Spectroscopy => cmd_spectroscopy(&cfg, &out)?,
        Verb::Calibrate => cmd_calibrate(&cfg, &out)?,
        Verb::DemoPhase { commensurate } => cmd_demo_phase(&cfg, &out, &load_record(&record_path)?, commensurate)?,
        Verb::Rb { interleave } => {
            let i = interleave.map(|a| match a {
                InterleaveArg::Iswap => Some(InterleavedGate::Iswap),
                InterleaveArg::None => None,
            });
            cmd_rb(&cfg, &out, &load_record(&record_path)?, i)?
        }
        Verb::Tomo { prep, gate } => {
            let prep: Preparation = prep.parse()?;
            let gates = match gate {
                InterleaveArg::Iswap => vec![Gate::Iswap],
                InterleaveArg::None => vec![],
            };
            cmd_tomo(&cfg, &out, &load_record(&record_path)?, prep, &gates)?
        }
    };
    for f in files {
        println!("{}", f.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
