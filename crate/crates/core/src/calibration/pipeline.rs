// Copyright 2026 dds-iswap Contributors
// SPDX-License-Identifier: Apache-2.0

use super::{
    amp_freq_sweep, calibrate_eta, calibrate_virtual_z, duration_freq_sweep, fit_rabi, select_amplitude,
    select_dc_bias, select_point, timestamp_now, AmplitudeChoice, Bench, CalibrationConfig, CalibrationRecord,
    DcBiasResult, EtaScan, OperatingPoint, RabiFit, SweepResult2D, VirtualZResult,
};
use crate::harness::{sha256_hex, sub_seed, write_csv, CsvTable};
use crate::{Error, Result};
use std::collections::BTreeMap;
use std::path::Path;

#[derive(Debug, Clone)]
pub struct PipelineOutput {
    pub record: CalibrationRecord,
    pub dc_bias: DcBiasResult,
    pub amp_sweep: SweepResult2D,
    pub rabi_fit: RabiFit,
    pub amplitude: AmplitudeChoice,
    pub duration_sweep: SweepResult2D,
    pub point: OperatingPoint,
    pub virtual_z: VirtualZResult,
    pub eta: EtaScan,
}

impl PipelineOutput {
    /// Writes the record and every sweep into `dir`.
    pub fn write(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        let mut dc = CsvTable::new(&["v_dc", "criterion_hz"]);
        for (v, c) in self.dc_bias.v_grid.iter().zip(&self.dc_bias.criterion) {
            dc.push(vec![*v, *c]);
        }
        write_csv(&dir.join("dc_bias.csv"), &dc, "minimum coupler-to-mode detuning per DC bias")?;
        write_csv(&dir.join("amp_freq_sweep.csv"), &self.amp_sweep.to_table(), &self.amp_sweep.describe())?;
        write_csv(
            &dir.join("duration_freq_sweep.csv"),
            &self.duration_sweep.to_table(),
            &self.duration_sweep.describe(),
        )?;
        let mut eta = CsvTable::new(&["eta", "mean_fidelity"]);
        for (e, s) in self.eta.candidates.iter().zip(&self.eta.scores) {
            eta.push(vec![*e, *s]);
        }
        write_csv(&dir.join("eta_scan.csv"), &eta, "coupler phase vs mean tomography fidelity")?;
        self.record.save(&dir.join("calibration_record.json"))
    }
}

/// Runs all stages: DC bias, amplitude/frequency sweep, duration/frequency
/// sweep, virtual Z, coupler phase. Stage errors carry the stage name.
pub fn full_pipeline(bench: &Bench, cal: &CalibrationConfig, master_seed: u64) -> Result<PipelineOutput> {
    cal.validate()?;
    bench.device.validate()?;
    bench.engine.validate()?;
    let stage = |name: &'static str| move |e: Error| match e {
        e @ Error::Calibration { .. } => e,
        other => Error::stage(name, other),
    };
    let config_hash = sha256_hex(&serde_json::to_vec(&(&bench.device, &bench.engine, cal))?);
    let mut timestamps = BTreeMap::new();
    let mut bench = bench.clone();
    bench.noise = cal.noise;

    let v_grid = cal.dc_bias.values()?;
    let dc_bias = select_dc_bias(&bench.device, &v_grid, None).map_err(stage("dc_bias"))?;
    timestamps.insert("dc_bias".to_string(), timestamp_now());

    let amps = cal.amplitudes.values()?;
    let freqs = cal.amp_frequencies.values()?;
    let s = cal.sampling(sub_seed(master_seed, "amp_freq", 0));
    let amp_sweep = amp_freq_sweep(&bench, &amps, &freqs, cal.amp_sweep_tau_ns, s).map_err(stage("amp_freq"))?;
    let rabi_fit = fit_rabi(&amp_sweep, cal.amp_sweep_tau_ns).map_err(stage("amp_freq"))?;
    let amplitude =
        select_amplitude(&amp_sweep, &rabi_fit, cal.min_oscillations, cal.min_contrast).map_err(stage("amp_freq"))?;
    timestamps.insert("amp_freq".to_string(), timestamp_now());

    let durs = cal.duration_grid()?;
    let freqs = cal.duration_frequencies.values()?;
    let s = cal.sampling(sub_seed(master_seed, "duration_freq", 0));
    let duration_sweep =
        duration_freq_sweep(&bench, amplitude.amplitude, &durs, &freqs, s).map_err(stage("duration_freq"))?;
    let point = select_point(&duration_sweep).map_err(stage("duration_freq"))?;
    timestamps.insert("duration_freq".to_string(), timestamp_now());

    let mut record = CalibrationRecord {
        v_dc: dc_bias.v_dc,
        amplitude: amplitude.amplitude,
        drive_frequency: point.drive_frequency,
        duration: point.duration_ns,
        eta: 0.0,
        vz_q1: 0.0,
        vz_q2: 0.0,
        timestamps: BTreeMap::new(),
        config_hash,
    };
    let s = cal.sampling(sub_seed(master_seed, "virtual_z", 0));
    let virtual_z = calibrate_virtual_z(&bench, &record, s).map_err(stage("virtual_z"))?;
    record.vz_q1 = virtual_z.vz_q1;
    record.vz_q2 = virtual_z.vz_q2;
    timestamps.insert("virtual_z".to_string(), timestamp_now());

    let s = cal.sampling(sub_seed(master_seed, "eta", 0));
    let eta = calibrate_eta(&bench, &record, cal.eta_steps, s).map_err(stage("eta"))?;
    record.eta = eta.eta;
    timestamps.insert("eta".to_string(), timestamp_now());
    record.timestamps = timestamps;
    record.validate()?;
    Ok(PipelineOutput { record, dc_bias, amp_sweep, rabi_fit, amplitude, duration_sweep, point, virtual_z, eta })
}
