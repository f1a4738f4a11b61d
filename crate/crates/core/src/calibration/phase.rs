// Copyright 2026 dds-iswap Contributors
// SPDX-License-Identifier: Apache-2.0

use super::{Bench, CalibrationRecord, Sampling};
use crate::compiler::{ideal_unitary, x90_minus, y90, Gate};
use crate::dds::wrap_pi;
use crate::device::{evolve_with, readout_probabilities};
use crate::harness::sub_seed;
use crate::quantum::{apply, state_fidelity, DensityMatrix, Qubit};
use crate::tomography::{local_bloch_vectors, local_settings, read_out, reconstruct, run_settings, BlochVector, TomographySetting};
use crate::{Error, Result};
use rayon::prelude::*;
use std::f64::consts::{PI, TAU};

fn superposition_prep() -> Vec<Gate> {
    let mut g = y90(Qubit::Q1).to_vec();
    g.extend(y90(Qubit::Q2));
    g
}

/// Bloch vectors of both qubits after `|++⟩ → echo`. The raw echo is a
/// pulse followed by a sign-inverted pulse with no frame updates; the
/// compensated one is the compiled `Iswap, MinusIswap` pair.
pub fn echo_phases(
    bench: &Bench,
    record: &CalibrationRecord,
    compensated: bool,
    sampling: Sampling,
) -> Result<[BlochVector; 2]> {
    let exp = bench.experiment(record.gate_params(&bench.device, &bench.engine)?)?;
    let settings = local_settings();
    let prep = superposition_prep();
    let states = if compensated {
        let mut head = prep;
        head.extend([Gate::Iswap, Gate::MinusIswap]);
        let tails: Vec<Vec<Gate>> = settings.iter().map(|s| s.gates()).collect();
        exp.final_states_with_tails(&head, &tails, 0)?
    } else {
        settings
            .iter()
            .map(|s| {
                let w = exp.compiler.compile_echo(&prep, &s.gates(), 0)?.render()?;
                Ok(evolve_with(&bench.device, &w, &DensityMatrix::basis(0, 0), bench.noise, bench.integrator)?.final_state)
            })
            .collect::<Result<Vec<_>>>()?
    };
    let e = bench.device.readout_assignment_error;
    let out = read_out(&states, &settings, e, sampling.shots, sampling.seed)?;
    local_bloch_vectors(&out, e)
}

#[derive(Debug, Clone, PartialEq)]
pub struct VirtualZResult {
    pub vz_q1: f64,
    pub vz_q2: f64,
    /// Azimuth of each qubit after the raw echo (twice the Stark phase).
    pub echo_phase: [f64; 2],
    /// Population left on Q2 after the raw echo from |10⟩, readout corrected.
    pub residual_swap: f64,
    /// Azimuth after the compensated echo.
    pub residual_phase: [f64; 2],
}

/// Measures the doubled Stark phase with the raw echo and returns the
/// compensating per-gate virtual-Z angles, then re-measures the echo with
/// the compensation applied.
pub fn calibrate_virtual_z(bench: &Bench, record: &CalibrationRecord, sampling: Sampling) -> Result<VirtualZResult> {
    let fail = |r: String| Error::Calibration { stage: "virtual_z".into(), reason: r };
    let e = bench.device.readout_assignment_error;
    // swap check from |10⟩
    let exp = bench.experiment(record.gate_params(&bench.device, &bench.engine)?)?;
    let w = exp.compiler.compile_echo(&[Gate::X90(Qubit::Q1), Gate::X90(Qubit::Q1)], &[], 0)?.render()?;
    let rho = evolve_with(&bench.device, &w, &DensityMatrix::basis(0, 0), bench.noise, bench.integrator)?.final_state;
    let settings = [TomographySetting { q1: crate::tomography::PreRotation::I, q2: crate::tomography::PreRotation::I }];
    let p = match sampling.shots {
        None => readout_probabilities(&rho, e),
        Some(_) => {
            read_out(&[rho], &settings, e, sampling.shots, sub_seed(sampling.seed, "vz_swap", 0))?[0].probabilities
        }
    };
    let residual_swap = ((p[1] + p[3] - e) / (1.0 - 2.0 * e)).max(0.0);
    if residual_swap > 0.05 {
        return Err(fail(format!("echo leaves {:.1}% on Q2; amplitude or duration is off", 100.0 * residual_swap)));
    }
    let raw = echo_phases(bench, record, false, sampling.with_seed(sub_seed(sampling.seed, "vz_echo", 0)))?;
    let echo_phase = [raw[0].phase(), raw[1].phase()];
    let mut comp = record.clone();
    comp.vz_q1 = -0.5 * echo_phase[0];
    comp.vz_q2 = -0.5 * echo_phase[1];
    let check = echo_phases(bench, &comp, true, sampling.with_seed(sub_seed(sampling.seed, "vz_check", 0)))?;
    Ok(VirtualZResult {
        vz_q1: comp.vz_q1,
        vz_q2: comp.vz_q2,
        echo_phase,
        residual_swap,
        residual_phase: [check[0].phase(), check[1].phase()],
    })
}

/// `steps` phases evenly covering `(−π, π]`.
pub fn eta_candidates(steps: usize) -> Vec<f64> {
    (0..steps).map(|k| -PI + TAU * (k + 1) as f64 / steps as f64).collect()
}

/// The two preparations `(|00⟩ + i|01⟩)/√2` and `(|00⟩ + i|10⟩)/√2`.
fn eta_preps() -> [Vec<Gate>; 2] {
    [x90_minus(Qubit::Q2).to_vec(), x90_minus(Qubit::Q1).to_vec()]
}

/// Mean two-qubit tomography fidelity of the gate outputs to the ideal
/// iSWAP outputs, with the coupler phase set to `eta`.
pub fn score_eta(bench: &Bench, record: &CalibrationRecord, eta: f64, sampling: Sampling) -> Result<f64> {
    let mut p = record.gate_params(&bench.device, &bench.engine)?;
    p.eta = eta;
    let exp = bench.experiment(p)?;
    let e = bench.device.readout_assignment_error;
    let mut total = 0.0;
    for (i, prep) in eta_preps().into_iter().enumerate() {
        let mut head = prep;
        head.push(Gate::Iswap);
        let seed = sub_seed(sampling.seed, "eta_prep", i as u64);
        let out = run_settings(&exp, &head, &TomographySetting::all(), sampling.shots, seed, 0)?;
        let rho = reconstruct(&out, e)?;
        let ideal = apply(&ideal_unitary(&head), &DensityMatrix::basis(0, 0));
        total += state_fidelity(&rho, &ideal)?;
    }
    Ok(total / 2.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EtaScan {
    pub candidates: Vec<f64>,
    pub scores: Vec<f64>,
    pub eta: f64,
    pub best_score: f64,
}

/// Scans the coupler phase and refines the best grid point with a parabola
/// through it and its two (cyclic) neighbours.
pub fn calibrate_eta(bench: &Bench, record: &CalibrationRecord, steps: usize, sampling: Sampling) -> Result<EtaScan> {
    if steps < 3 {
        return Err(Error::invalid("eta scan needs at least 3 phases"));
    }
    let candidates = eta_candidates(steps);
    let scores: Vec<f64> = candidates
        .par_iter()
        .enumerate()
        .map(|(k, &eta)| score_eta(bench, record, eta, sampling.with_seed(sub_seed(sampling.seed, "eta", k as u64))))
        .collect::<Result<_>>()?;
    let k = (0..steps).max_by(|&a, &b| scores[a].partial_cmp(&scores[b]).unwrap()).unwrap();
    let best_score = scores[k];
    if best_score < 0.9 {
        return Err(Error::Calibration {
            stage: "eta".into(),
            reason: format!("best gate fidelity {best_score:.3} < 0.9"),
        });
    }
    let (a, b, c) = (scores[(k + steps - 1) % steps], scores[k], scores[(k + 1) % steps]);
    let den = a - 2.0 * b + c;
    let off = if den < 0.0 { (0.5 * (a - c) / den).clamp(-0.5, 0.5) } else { 0.0 };
    let eta = wrap_pi(candidates[k] + off * TAU / steps as f64);
    Ok(EtaScan { candidates, scores, eta, best_score })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compiler::EngineConfig;
    use crate::device::{DeviceConfig, Noise};

    fn setup(cfg: DeviceConfig) -> (Bench, CalibrationRecord) {
        let r = CalibrationRecord::from_model(&cfg, 3.775, 0.236, 290);
        (Bench::new(cfg, EngineConfig::default(), Noise::Off), r)
    }

    #[test]
    fn candidates_cover_half_open_circle() {
        let c = eta_candidates(4);
        assert_eq!(c.len(), 4);
        assert!((c[3] - PI).abs() < 1e-15 && (c[0] + PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn virtual_z_matches_stark_prediction() {
        let (b, r) = setup(DeviceConfig::default());
        let v = calibrate_virtual_z(&b, &r, Sampling::analytic()).unwrap();
        let deg = 180.0 / PI;
        assert!((v.vz_q1 - r.vz_q1).abs() * deg < 2.0, "{} vs {}", v.vz_q1, r.vz_q1);
        assert!((v.vz_q2 - r.vz_q2).abs() * deg < 2.0, "{} vs {}", v.vz_q2, r.vz_q2);
        assert!(v.residual_swap < 0.01);
        assert!(v.residual_phase.iter().all(|p| p.abs() * deg < 1.0), "{:?}", v.residual_phase);
    }

    #[test]
    fn no_stark_no_virtual_z() {
        let (b, r) = setup(DeviceConfig::default().without_stark());
        let v = calibrate_virtual_z(&b, &r, Sampling::analytic()).unwrap();
        assert!(v.vz_q1.abs() < 1e-3 && v.vz_q2.abs() < 1e-3, "{v:?}");
    }

    #[test]
    fn detuned_drive_is_reported() {
        // the echo undoes any swap angle, but not a detuned one
        let (b, mut r) = setup(DeviceConfig::default());
        r.drive_frequency += 2e6;
        assert!(matches!(calibrate_virtual_z(&b, &r, Sampling::analytic()), Err(Error::Calibration { .. })));
    }

    #[test]
    fn eta_scan_finds_zero_and_tracks_reference_phase() {
        let (b, r) = setup(DeviceConfig::default());
        let scan = calibrate_eta(&b, &r, 24, Sampling::analytic()).unwrap();
        assert!(scan.eta.abs() < 2f64.to_radians(), "{}", scan.eta);
        let mut r2 = r.clone();
        r2.eta = scan.eta;
        assert!(score_eta(&b, &r2, scan.eta, Sampling::analytic()).unwrap() >= 0.995);
        let mut shifted = b.clone();
        shifted.engine.reference_phase_coupler = 30f64.to_radians();
        let s2 = calibrate_eta(&shifted, &r, 24, Sampling::analytic()).unwrap();
        let d = wrap_pi(s2.eta - scan.eta).to_degrees();
        assert!((d + 30.0).abs() < 2.0, "shift {d}");
    }

    #[test]
    fn eta_score_is_periodic() {
        let (b, r) = setup(DeviceConfig::default());
        let a = score_eta(&b, &r, 0.4, Sampling::analytic()).unwrap();
        let c = score_eta(&b, &r, 0.4 + TAU, Sampling::analytic()).unwrap();
        assert!((a - c).abs() < 1e-9);
    }
}
