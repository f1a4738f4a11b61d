// Copyright 2026 dds-iswap Contributors
// SPDX-License-Identifier: Apache-2.0

use super::decay::{fit_decay, gate_error_with_uncertainty, DecayFit, GateError, DIMENSION};
use super::group::{CliffordGroup, Generator};
use super::sequence::{build_sequence, native_duration_ns, InterleavedGate, RbSequence};
use crate::calibration::{measured_populations, Bench, CalibrationRecord, Sampling};
use crate::compiler::Gate;
use crate::device::Noise;
use crate::harness::{sub_seed, CsvTable};
use crate::quantum::{depolarizing_channel, relaxation_channel, DensityMatrix, Mat4, NoiseChannel, Qubit, Superop, C64};
use crate::{Error, Result};
use nalgebra::SVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

type Liouville = SVector<C64, 16>;

/// iSWAPs that carry the injected depolarization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NoiseScope {
    /// Every physical iSWAP, including those inside Clifford decompositions.
    All,
    /// Only the interleaved gate.
    Interleaved,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RBConfig {
    /// Clifford counts per sequence.
    pub depths: Vec<usize>,
    pub realizations: usize,
    pub shots: u64,
    /// Exact probabilities instead of sampled shots.
    pub analytic: bool,
    pub interleave: Option<InterleavedGate>,
    /// Set by the caller (derived from the run's master seed).
    #[serde(skip)]
    pub seed: u64,
    /// Average error of a depolarizing channel injected after iSWAPs.
    pub iswap_depolarizing: f64,
    /// Which iSWAPs receive `iswap_depolarizing`.
    pub iswap_noise_scope: NoiseScope,
    /// Average error of a depolarizing channel injected after every Clifford.
    pub clifford_depolarizing: f64,
    /// T1/T2 decay during gates.
    pub noise: Noise,
    /// Realizations per curve and depth rerun on the waveform path.
    pub spot_checks: usize,
    pub spot_check_max_depth: usize,
}

impl Default for RBConfig {
    fn default() -> Self {
        Self {
            depths: vec![1, 2, 4, 7, 10, 14, 18, 22, 26, 30],
            realizations: 200,
            shots: 1000,
            analytic: false,
            interleave: Some(InterleavedGate::Iswap),
            seed: 0,
            iswap_depolarizing: 0.0,
            iswap_noise_scope: NoiseScope::All,
            clifford_depolarizing: 0.0,
            noise: Noise::On,
            spot_checks: 1,
            spot_check_max_depth: 3,
        }
    }
}

impl RBConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |f: &str, r: &str| Err(Error::Config { path: format!("rb.{f}"), reason: r.into() });
        if self.depths.is_empty() || self.depths.contains(&0) {
            return bad("depths", "must be nonempty and positive");
        }
        if self.realizations == 0 {
            return bad("realizations", "must be positive");
        }
        if !self.analytic && self.shots == 0 {
            return bad("shots", "must be positive unless analytic");
        }
        for (f, e) in [("iswap_depolarizing", self.iswap_depolarizing), ("clifford_depolarizing", self.clifford_depolarizing)] {
            if !(0.0..=0.75).contains(&e) {
                return bad(f, "must lie in [0, 0.75]");
            }
        }
        Ok(())
    }
}

/// Per-gate superoperators of the fast path: ideal unitary, then T1/Tφ decay
/// of both qubits over the gate duration, then the injected depolarization.
#[derive(Debug, Clone)]
pub struct FastModel {
    generators: Vec<(Generator, Superop)>,
    interleaved: Superop,
    clifford_noise: Option<Superop>,
    device: crate::device::DeviceConfig,
    noise: Noise,
    iswap_depolarizing: f64,
}

impl FastModel {
    pub fn new(
        device: &crate::device::DeviceConfig,
        noise: Noise,
        iswap_depolarizing: f64,
        scope: NoiseScope,
        clifford_depolarizing: f64,
    ) -> Result<Self> {
        let mut m = Self {
            generators: Vec::new(),
            interleaved: Superop::identity(),
            clifford_noise: None,
            device: device.clone(),
            noise,
            iswap_depolarizing,
        };
        let inject_all = scope == NoiseScope::All;
        m.generators = Generator::ALL.iter().map(|g| Ok((*g, m.gate_superop(&g.gate(), inject_all)?))).collect::<Result<_>>()?;
        m.interleaved = m.gate_superop(&Gate::Iswap, true)?;
        if clifford_depolarizing > 0.0 {
            m.clifford_noise = Some(depolarizing_channel(clifford_depolarizing)?.superoperator());
        }
        Ok(m)
    }

    fn gate_superop(&self, g: &Gate, inject: bool) -> Result<Superop> {
        let mut ch = NoiseChannel::from_unitary(&g.unitary());
        let t = native_duration_ns(g) as f64 * 1e-9;
        if self.noise == Noise::On && t > 0.0 {
            for q in Qubit::BOTH {
                let (t1, _) = self.device.coherence(q);
                ch = relaxation_channel(t, t1, self.device.t_phi(q), q.index())?.after(&ch);
            }
        }
        if inject && matches!(g, Gate::Iswap | Gate::MinusIswap) && self.iswap_depolarizing > 0.0 {
            ch = depolarizing_channel(self.iswap_depolarizing)?.after(&ch);
        }
        Ok(ch.superoperator())
    }

    fn apply_gate(&self, g: &Gate, v: &Liouville) -> Result<Liouville> {
        let gen = self.generators.iter().find(|(k, _)| k.gate() == *g);
        Ok(match gen {
            Some((_, s)) => s * v,
            None => self.gate_superop(g, false)? * v,
        })
    }

    /// Final state of `seq` from |00⟩.
    pub fn run(&self, group: &CliffordGroup, seq: &RbSequence) -> Result<DensityMatrix> {
        let rho0 = DensityMatrix::basis(0, 0);
        let mut v = Liouville::from_column_slice(rho0.matrix().as_slice());
        let m = seq.cliffords.len() - 1;
        for (k, &c) in seq.cliffords.iter().enumerate() {
            for g in group.element(c).gates() {
                v = self.apply_gate(&g, &v)?;
            }
            if let Some(s) = &self.clifford_noise {
                v = s * v;
            }
            if let (Some(InterleavedGate::Iswap), true) = (seq.interleave, k < m) {
                v = self.interleaved * v;
            }
        }
        Ok(DensityMatrix::from_matrix_unchecked(Mat4::from_column_slice(v.as_slice())))
    }
}

/// One measured sequence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RbRecord {
    pub depth: usize,
    pub realization: usize,
    pub interleaved: bool,
    /// Measured ground-state probability of (Q1, Q2).
    pub ground: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveFit {
    pub fit: Option<DecayFit>,
    /// The means were flat within shot noise and `p = 1` was reported.
    pub flat: bool,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RbCurve {
    pub interleaved: bool,
    /// Mean ground-state probability per depth, per qubit.
    pub means: [Vec<f64>; 2],
    pub fits: [CurveFit; 2],
}

/// Fast-path vs waveform populations for one short sequence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpotCheck {
    pub depth: usize,
    pub realization: usize,
    pub interleaved: bool,
    pub fast: [f64; 2],
    pub slow: [f64; 2],
}

impl SpotCheck {
    pub fn deviation(&self) -> f64 {
        (self.fast[0] - self.slow[0]).abs().max((self.fast[1] - self.slow[1]).abs())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RBResult {
    pub dimension: usize,
    pub depths: Vec<usize>,
    pub records: Vec<RbRecord>,
    pub reference: RbCurve,
    pub interleaved: Option<RbCurve>,
    /// Interleaved-gate error per qubit.
    pub gate_error: [Option<GateError>; 2],
    pub spot_checks: Vec<SpotCheck>,
}

impl RBResult {
    /// Fit failures, as "curve qubit: reason".
    pub fn fit_failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        for c in std::iter::once(&self.reference).chain(&self.interleaved) {
            for (q, f) in c.fits.iter().enumerate() {
                if let Some(e) = &f.error {
                    let name = if c.interleaved { "interleaved" } else { "reference" };
                    out.push(format!("{name} Q{}: {e}", q + 1));
                }
            }
        }
        out
    }

    pub fn to_table(&self) -> CsvTable {
        let mut t = CsvTable::new(&["depth", "realization", "pop_q1", "pop_q2", "interleaved"]);
        for r in &self.records {
            t.push(vec![r.depth as f64, r.realization as f64, r.ground[0], r.ground[1], r.interleaved as u8 as f64]);
        }
        t
    }

    /// Fit summary for the sidecar JSON.
    pub fn summary(&self) -> serde_json::Value {
        let curve = |c: &RbCurve| {
            serde_json::json!({
                "q1": c.fits[0],
                "q2": c.fits[1],
                "means_q1": c.means[0],
                "means_q2": c.means[1],
            })
        };
        serde_json::json!({
            "d": self.dimension,
            "depths": self.depths,
            "reference": curve(&self.reference),
            "interleaved": self.interleaved.as_ref().map(curve),
            "gate_error": { "q1": self.gate_error[0], "q2": self.gate_error[1] },
            "max_spot_check_deviation": self.spot_checks.iter().map(SpotCheck::deviation).fold(0.0, f64::max),
        })
    }
}

fn stage(interleaved: bool) -> &'static str {
    if interleaved {
        "rb_interleaved"
    } else {
        "rb_reference"
    }
}

fn sequence_for(group: &CliffordGroup, cfg: &RBConfig, interleaved: bool, d: usize, r: usize) -> RbSequence {
    let idx = (d * cfg.realizations + r) as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(cfg.seed, stage(interleaved), idx));
    let inter = if interleaved { cfg.interleave } else { None };
    build_sequence(group, cfg.depths[d], inter, &mut rng)
}

fn fit_curve(depths: &[f64], means: &[f64], sigma: f64) -> CurveFit {
    let (lo, hi) = means.iter().fold((f64::MAX, f64::MIN), |(l, h), &y| (l.min(y), h.max(y)));
    let mean = means.iter().sum::<f64>() / means.len() as f64;
    if hi - lo <= 6.0 * sigma {
        let fit = DecayFit { a: 0.0, b: mean, p: 1.0, a_err: 0.0, b_err: 0.0, p_err: 0.0 };
        return CurveFit { fit: Some(fit), flat: true, error: None };
    }
    match fit_decay(depths, means) {
        Ok(f) => CurveFit { fit: Some(f), flat: false, error: None },
        Err(e) => CurveFit { fit: None, flat: false, error: Some(e.to_string()) },
    }
}

/// Runs the reference curve and, when configured, the interleaved curve.
/// Every sequence goes through the fast channel path; the first
/// `spot_checks` realizations at depths up to `spot_check_max_depth` are
/// also run through the compiled waveforms (without injected
/// depolarization) for comparison.
pub fn run_rb(cfg: &RBConfig, bench: &Bench, record: &CalibrationRecord, group: &CliffordGroup) -> Result<RBResult> {
    cfg.validate()?;
    let e = bench.device.readout_assignment_error;
    let model = FastModel::new(&bench.device, cfg.noise, cfg.iswap_depolarizing, cfg.iswap_noise_scope, cfg.clifford_depolarizing)?;
    let curves: Vec<bool> = if cfg.interleave.is_some() { vec![false, true] } else { vec![false] };
    let tasks: Vec<(bool, usize, usize)> = curves
        .iter()
        .flat_map(|&il| (0..cfg.depths.len()).flat_map(move |d| (0..cfg.realizations).map(move |r| (il, d, r))))
        .collect();
    let records: Vec<RbRecord> = tasks
        .par_iter()
        .map(|&(il, d, r)| {
            let seq = sequence_for(group, cfg, il, d, r);
            let rho = model.run(group, &seq)?;
            let idx = (d * cfg.realizations + r) as u64;
            let sampling = Sampling {
                shots: if cfg.analytic { None } else { Some(cfg.shots) },
                seed: sub_seed(cfg.seed, &format!("{}_shots", stage(il)), idx),
            };
            let ex = measured_populations(&rho, e, sampling)?;
            Ok(RbRecord { depth: cfg.depths[d], realization: r, interleaved: il, ground: [1.0 - ex[0], 1.0 - ex[1]] })
        })
        .collect::<Result<_>>()?;

    let depths_f: Vec<f64> = cfg.depths.iter().map(|&m| m as f64).collect();
    let curve = |il: bool| -> RbCurve {
        let mut means = [vec![0.0; cfg.depths.len()], vec![0.0; cfg.depths.len()]];
        for r in records.iter().filter(|r| r.interleaved == il) {
            let d = cfg.depths.iter().position(|&m| m == r.depth).unwrap();
            for q in 0..2 {
                means[q][d] += r.ground[q] / cfg.realizations as f64;
            }
        }
        let fits = [0, 1].map(|q| {
            let y = &means[q];
            let ybar = y.iter().sum::<f64>() / y.len() as f64;
            let sigma = if cfg.analytic {
                1e-9
            } else {
                (ybar * (1.0 - ybar) / (cfg.shots as f64 * cfg.realizations as f64)).sqrt() + 1e-9
            };
            fit_curve(&depths_f, y, sigma)
        });
        RbCurve { interleaved: il, means, fits }
    };
    let reference = curve(false);
    let interleaved = cfg.interleave.map(|_| curve(true));
    let gate_error = [0, 1].map(|q| {
        let i = interleaved.as_ref()?.fits[q].fit?;
        let r = reference.fits[q].fit?;
        gate_error_with_uncertainty(&i, &r).ok()
    });

    let spot_checks = spot_check(cfg, bench, record, group)?;
    Ok(RBResult {
        dimension: DIMENSION,
        depths: cfg.depths.clone(),
        records,
        reference,
        interleaved,
        gate_error,
        spot_checks,
    })
}

fn spot_check(cfg: &RBConfig, bench: &Bench, record: &CalibrationRecord, group: &CliffordGroup) -> Result<Vec<SpotCheck>> {
    if cfg.spot_checks == 0 {
        return Ok(Vec::new());
    }
    let model = FastModel::new(&bench.device, cfg.noise, 0.0, NoiseScope::All, 0.0)?;
    let mut slow_bench = bench.clone();
    slow_bench.noise = cfg.noise;
    let exp = slow_bench.experiment(record.gate_params(&bench.device, &bench.engine)?)?;
    let curves: Vec<bool> = if cfg.interleave.is_some() { vec![false, true] } else { vec![false] };
    let mut tasks = Vec::new();
    for &il in &curves {
        for (d, &m) in cfg.depths.iter().enumerate() {
            if m <= cfg.spot_check_max_depth {
                for r in 0..cfg.spot_checks.min(cfg.realizations) {
                    tasks.push((il, d, r));
                }
            }
        }
    }
    tasks
        .par_iter()
        .map(|&(il, d, r)| {
            let seq = sequence_for(group, cfg, il, d, r);
            let fast = model.run(group, &seq)?;
            let slow = exp.final_state(&seq.gates, 0)?;
            let ground = |rho: &DensityMatrix| [rho.ground_population(Qubit::Q1), rho.ground_population(Qubit::Q2)];
            Ok(SpotCheck { depth: cfg.depths[d], realization: r, interleaved: il, fast: ground(&fast), slow: ground(&slow) })
        })
        .collect()
}
