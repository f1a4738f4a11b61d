// Copyright 2026 dds-iswap Contributors
// SPDX-License-Identifier: Apache-2.0

//! Phase-coherence demonstration: the calibrated gate on phase-sensitive
//! preparations, averaged over many repetitions with commensurate or
//! non-commensurate NCOs.

use super::config::DemoConfig;
use super::seeds::sub_seed;
use crate::calibration::{Bench, CalibrationRecord};
use crate::compiler::{ideal_unitary, x90_minus, Gate};
use crate::quantum::{apply, state_fidelity, DensityMatrix, Qubit};
use crate::tomography::{local_bloch_vectors, reconstruct, run_settings, BlochVector, SettingOutcome, TomographySetting};
use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Named input states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Preparation {
    Basis00,
    Basis01,
    Basis10,
    Basis11,
    /// (|00⟩ + i|01⟩)/√2
    SuperposA,
    /// (|00⟩ + i|10⟩)/√2
    SuperposB,
}

impl Preparation {
    pub const ALL: [Preparation; 6] =
        [Self::Basis00, Self::Basis01, Self::Basis10, Self::Basis11, Self::SuperposA, Self::SuperposB];

    pub fn label(self) -> &'static str {
        match self {
            Self::Basis00 => "00",
            Self::Basis01 => "01",
            Self::Basis10 => "10",
            Self::Basis11 => "11",
            Self::SuperposA => "superpos_a",
            Self::SuperposB => "superpos_b",
        }
    }

    pub fn gates(self) -> Vec<Gate> {
        let flip = |q| [Gate::X90(q), Gate::X90(q)];
        match self {
            Self::Basis00 => vec![],
            Self::Basis01 => flip(Qubit::Q2).to_vec(),
            Self::Basis10 => flip(Qubit::Q1).to_vec(),
            Self::Basis11 => [flip(Qubit::Q1), flip(Qubit::Q2)].concat(),
            Self::SuperposA => x90_minus(Qubit::Q2).to_vec(),
            Self::SuperposB => x90_minus(Qubit::Q1).to_vec(),
        }
    }
}

impl fmt::Display for Preparation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Preparation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|p| p.label() == s).ok_or_else(|| Error::Config {
            path: "prep".into(),
            reason: format!("unknown preparation `{s}` (expected 00, 01, 10, 11, superpos_a or superpos_b)"),
        })
    }
}

/// The three demonstration inputs.
pub const DEMO_PREPARATIONS: [Preparation; 3] = [Preparation::SuperposA, Preparation::SuperposB, Preparation::Basis10];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AveragedGate {
    pub preparation: Preparation,
    pub commensurate: bool,
    /// Readout-corrected Bloch vectors of the averaged outcomes.
    pub bloch: [BlochVector; 2],
    /// Two-qubit tomography of the averaged outcomes against the ideal output.
    pub fidelity: f64,
}

/// Repetition start times: multiples of the repetition period, plus a random
/// grid offset when `jitter` is set.
pub fn repetition_starts(period_ns: i64, n: usize, max_offset_ns: i64, jitter: bool, seed: u64) -> Vec<i64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n as i64)
        .map(|k| {
            let off = if jitter { 2 * rng.random_range(0..max_offset_ns / 2) } else { 0 };
            k * period_ns + off
        })
        .collect()
}

/// Runs `prep` then the calibrated iSWAP once per repetition and averages
/// the tomography outcomes over repetitions.
pub fn averaged_gate(
    bench: &Bench,
    record: &CalibrationRecord,
    prep: Preparation,
    commensurate: bool,
    cfg: &DemoConfig,
    seed: u64,
) -> Result<AveragedGate> {
    let mut b = bench.clone();
    b.engine.commensurate = commensurate;
    b.noise = cfg.noise;
    let exp = b.experiment(record.gate_params(&b.device, &b.engine)?)?;
    let mut head = prep.gates();
    head.push(Gate::Iswap);
    let settings = TomographySetting::all();
    let starts = repetition_starts(b.engine.repetition_period_ns, cfg.repetitions, cfg.max_offset_ns, !commensurate, sub_seed(seed, "demo_offsets", 0));
    let shots = if cfg.analytic { None } else { Some(cfg.shots) };
    let runs: Vec<Vec<SettingOutcome>> = starts
        .par_iter()
        .enumerate()
        .map(|(k, &t0)| run_settings(&exp, &head, &settings, shots, sub_seed(seed, "demo_shots", k as u64), t0))
        .collect::<Result<_>>()?;
    let n = runs.len() as f64;
    let averaged: Vec<SettingOutcome> = (0..settings.len())
        .map(|s| {
            let mut p = [0.0; 4];
            for r in &runs {
                for (acc, x) in p.iter_mut().zip(r[s].probabilities) {
                    *acc += x / n;
                }
            }
            SettingOutcome { setting: settings[s], probabilities: p, counts: None }
        })
        .collect();
    let e = b.device.readout_assignment_error;
    let bloch = local_bloch_vectors(&averaged, e)?;
    let ideal = apply(&ideal_unitary(&head), &DensityMatrix::basis(0, 0));
    let fidelity = state_fidelity(&reconstruct(&averaged, e)?, &ideal)?;
    Ok(AveragedGate { preparation: prep, commensurate, bloch, fidelity })
}

/// Both regimes (or one) for the three demonstration inputs.
pub fn phase_demo(
    bench: &Bench,
    record: &CalibrationRecord,
    cfg: &DemoConfig,
    regimes: &[bool],
    seed: u64,
) -> Result<Vec<AveragedGate>> {
    let mut out = Vec::new();
    for &c in regimes {
        for (i, p) in DEMO_PREPARATIONS.into_iter().enumerate() {
            let s = sub_seed(seed, if c { "demo_commensurate" } else { "demo_noncommensurate" }, i as u64);
            out.push(averaged_gate(bench, record, p, c, cfg, s)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compiler::EngineConfig;
    use crate::device::{DeviceConfig, Noise};

    #[test]
    fn labels_round_trip() {
        for p in Preparation::ALL {
            assert_eq!(p.label().parse::<Preparation>().unwrap(), p);
        }
        assert!(matches!("2".parse::<Preparation>(), Err(Error::Config { .. })));
    }

    #[test]
    fn preparations_make_the_named_states() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let rho = |p: Preparation| apply(&ideal_unitary(&p.gates()), &DensityMatrix::basis(0, 0));
        assert!((rho(Preparation::Basis11).populations()[3] - 1.0).abs() < 1e-12);
        assert!((rho(Preparation::Basis01).populations()[1] - 1.0).abs() < 1e-12);
        let a = rho(Preparation::SuperposA);
        // ⟨00|ρ|01⟩ = (1)(−i)/2
        assert!((a.matrix()[(0, 1)] - crate::quantum::C64::new(0.0, -0.5)).norm() < 1e-12);
        let b = rho(Preparation::SuperposB);
        assert!((b.matrix()[(0, 2)].im + s * s).abs() < 1e-12);
    }

    #[test]
    fn starts_stay_on_grid() {
        let t = repetition_starts(10_000, 50, 10_000, true, 1);
        assert!(t.iter().enumerate().all(|(k, &x)| x % 2 == 0 && x >= k as i64 * 10_000 && x < (k as i64 + 1) * 10_000));
        assert_eq!(repetition_starts(10_000, 3, 10_000, false, 1), vec![0, 10_000, 20_000]);
    }

    #[test]
    fn phase_regimes() {
        let dev = DeviceConfig::default();
        let rec = CalibrationRecord::from_model(&dev, 3.775, 0.236, 290);
        let bench = Bench::new(dev, EngineConfig::default(), Noise::Off);
        let cfg = DemoConfig { repetitions: 40, analytic: true, noise: Noise::Off, ..DemoConfig::default() };
        let on = averaged_gate(&bench, &rec, Preparation::SuperposA, true, &cfg, 1).unwrap();
        let off = averaged_gate(&bench, &rec, Preparation::SuperposA, false, &cfg, 1).unwrap();
        // |00⟩ + i|01⟩ → |00⟩ − |10⟩: Q1 carries the phase
        assert!(on.bloch[0].norm() > 0.9 && on.fidelity > 0.95, "{on:?}");
        assert!(off.bloch[0].norm() < 0.2, "{off:?}");
        let b_on = averaged_gate(&bench, &rec, Preparation::Basis10, true, &cfg, 1).unwrap();
        let b_off = averaged_gate(&bench, &rec, Preparation::Basis10, false, &cfg, 1).unwrap();
        assert!((b_on.bloch[1].z - b_off.bloch[1].z).abs() < 1e-6);
    }
}
