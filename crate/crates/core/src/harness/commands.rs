// Copyright 2026 dds-iswap Contributors
// SPDX-License-Identifier: Apache-2.0

use super::config::RunConfig;
use super::demo::{phase_demo, Preparation, DEMO_PREPARATIONS};
use super::export::{write_csv, CsvTable};
use super::seeds::sub_seed;
use crate::benchmarking::{run_rb, CliffordGroup, InterleavedGate};
use crate::calibration::{full_pipeline, Bench, CalibrationRecord};
use crate::compiler::{ideal_unitary, Gate};
use crate::device::{Noise, SpectroscopySweep};
use crate::quantum::{apply, DensityMatrix};
use crate::tomography::{expectations, reconstruct, run_settings, TomographyReport, TomographySetting};
use crate::{Error, Result};
use serde::Serialize;
use std::path::{Path, PathBuf};

/// Environment variable overriding the output directory.
pub const OUT_DIR_ENV: &str = "DDS_ISWAP_OUT";
pub const RECORD_FILE: &str = "calibration_record.json";

/// Process exit status for an error: 2 configuration, 3 calibration stage,
/// 4 fit, 1 anything else.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config { .. } => 2,
        Error::Calibration { .. } => 3,
        Error::Fit(_) => 4,
        _ => 1,
    }
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    std::fs::write(path, s)?;
    Ok(())
}

fn bench(cfg: &RunConfig, noise: Noise) -> Bench {
    Bench::new(cfg.device.clone(), cfg.engine, noise)
}

/// Reads a calibration record; a missing file is reported as a
/// configuration error.
pub fn load_record(path: &Path) -> Result<CalibrationRecord> {
    if !path.exists() {
        return Err(Error::Config {
            path: "record".into(),
            reason: format!("{} not found; run `calibrate` first", path.display()),
        });
    }
    CalibrationRecord::load(path)
}

/// Resonator and two-tone maps over the configured grids.
pub fn cmd_spectroscopy(cfg: &RunConfig, out: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(out)?;
    let v = cfg.spectroscopy.v_dc.values()?;
    let res = SpectroscopySweep::resonator(&cfg.device, &v, &cfg.spectroscopy.resonator_frequencies.values()?)?;
    let qub = SpectroscopySweep::qubit(&cfg.device, &v, &cfg.spectroscopy.qubit_frequencies.values()?)?;
    let a = out.join("resonator_sweep.csv");
    let b = out.join("two_tone.csv");
    write_csv(&a, &res.to_table(), "readout resonator transmission vs DC bias and probe frequency")?;
    write_csv(&b, &qub.to_table(), "two-tone qubit response vs DC bias and probe frequency")?;
    Ok(vec![a, b])
}

/// Full calibration; writes the sweeps and the record.
pub fn cmd_calibrate(cfg: &RunConfig, out: &Path) -> Result<Vec<PathBuf>> {
    let run = full_pipeline(&bench(cfg, cfg.calibration.noise), &cfg.calibration, cfg.seed)?;
    run.write(out)?;
    Ok(["dc_bias.csv", "amp_freq_sweep.csv", "duration_freq_sweep.csv", "eta_scan.csv", RECORD_FILE]
        .iter()
        .map(|f| out.join(f))
        .collect())
}

/// Averaged Bloch vectors of the demonstration inputs; `commensurate`
/// restricts the run to one regime.
pub fn cmd_demo_phase(cfg: &RunConfig, out: &Path, record: &CalibrationRecord, commensurate: Option<bool>) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(out)?;
    let regimes = match commensurate {
        Some(c) => vec![c],
        None => vec![true, false],
    };
    let results = phase_demo(&bench(cfg, cfg.demo.noise), record, &cfg.demo, &regimes, sub_seed(cfg.seed, "demo", 0))?;
    let mut t = CsvTable::new(&["commensurate", "prep", "qubit", "x", "y", "z", "norm"]);
    for r in &results {
        let prep = DEMO_PREPARATIONS.iter().position(|p| *p == r.preparation).unwrap();
        for (q, v) in r.bloch.iter().enumerate() {
            t.push(vec![r.commensurate as u8 as f64, prep as f64, (q + 1) as f64, v.x, v.y, v.z, v.norm()]);
        }
    }
    let csv = out.join("bloch_vectors.csv");
    write_csv(
        &csv,
        &t,
        "repetition-averaged Bloch vectors after the iSWAP; prep 0 = superpos_a, 1 = superpos_b, 2 = |10>",
    )?;
    let json = out.join("demo_summary.json");
    write_json(&json, &results)?;
    Ok(vec![csv, json])
}

/// Interleaved randomized benchmarking. `interleave` overrides the
/// configured interleaved gate.
pub fn cmd_rb(
    cfg: &RunConfig,
    out: &Path,
    record: &CalibrationRecord,
    interleave: Option<Option<InterleavedGate>>,
) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(out)?;
    let mut rb = cfg.rb.clone();
    rb.seed = sub_seed(cfg.seed, "rb", 0);
    if let Some(i) = interleave {
        rb.interleave = i;
    }
    let group = CliffordGroup::load_or_build(&out.join("clifford_group.bin"))?;
    let res = run_rb(&rb, &bench(cfg, rb.noise), record, &group)?;
    let csv = out.join("rb_data.csv");
    write_csv(&csv, &res.to_table(), "measured ground-state probability per sequence; interleaved 0 = reference")?;
    let json = out.join("fit.json");
    write_json(&json, &res.summary())?;
    let failures = res.fit_failures();
    if !failures.is_empty() {
        return Err(Error::Fit(failures.join("; ")));
    }
    Ok(vec![csv, json])
}

/// Nine-setting tomography of `prep` followed by `gates`.
pub fn cmd_tomo(cfg: &RunConfig, out: &Path, record: &CalibrationRecord, prep: Preparation, gates: &[Gate]) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(out)?;
    let b = bench(cfg, cfg.tomo.noise);
    let exp = b.experiment(record.gate_params(&b.device, &b.engine)?)?;
    let mut head = prep.gates();
    head.extend_from_slice(gates);
    let shots = if cfg.tomo.analytic { None } else { Some(cfg.tomo.shots) };
    let outcomes = run_settings(&exp, &head, &TomographySetting::all(), shots, sub_seed(cfg.seed, "tomo", 0), 0)?;
    let e = b.device.readout_assignment_error;
    let rho = reconstruct(&outcomes, e)?;
    let ideal = apply(&ideal_unitary(&head), &DensityMatrix::basis(0, 0));
    let report = TomographyReport::new(prep.label(), expectations(&outcomes, e)?, &rho, Some(&ideal))?;
    let path = out.join(format!("tomography_{}.json", prep.label()));
    write_json(&path, &report)?;
    Ok(vec![path])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::Config { path: "a".into(), reason: "b".into() }), 2);
        assert_eq!(exit_code(&Error::stage("eta", "x")), 3);
        assert_eq!(exit_code(&Error::Fit("x".into())), 4);
        assert_eq!(exit_code(&Error::invalid("x")), 1);
    }

    #[test]
    fn missing_record_is_a_config_error() {
        let dir = tempfile::tempdir().unwrap();
        let e = load_record(&dir.path().join(RECORD_FILE)).unwrap_err();
        assert_eq!(exit_code(&e), 2);
    }

    #[test]
    fn spectroscopy_sizes_and_replay() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = RunConfig::default();
        cfg.spectroscopy.v_dc = crate::grid::Axis::new(3.7, 3.8, 0.05);
        cfg.spectroscopy.resonator_frequencies = crate::grid::Axis::new(6.0e9, 6.01e9, 5e6);
        cfg.spectroscopy.qubit_frequencies = crate::grid::Axis::single(4.8e9);
        let files = cmd_spectroscopy(&cfg, dir.path()).unwrap();
        let lines = |p: &Path| std::fs::read_to_string(p).unwrap().lines().count();
        assert_eq!(lines(&files[0]), 1 + 3 * 3);
        assert_eq!(lines(&files[1]), 1 + 3);
        let first = std::fs::read(&files[0]).unwrap();
        cmd_spectroscopy(&cfg, dir.path()).unwrap();
        assert_eq!(std::fs::read(&files[0]).unwrap(), first);
    }

    #[test]
    fn tomo_of_ground_state_is_exact_without_noise() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = RunConfig::default();
        cfg.tomo = crate::harness::TomoConfig { analytic: true, noise: Noise::Off, ..cfg.tomo };
        let rec = CalibrationRecord::from_model(&cfg.device, 3.775, 0.236, 290);
        let f = cmd_tomo(&cfg, dir.path(), &rec, Preparation::Basis00, &[Gate::Iswap]).unwrap();
        let r: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&f[0]).unwrap()).unwrap();
        assert!((r["fidelity_to_ideal"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    }
}
