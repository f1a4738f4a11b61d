// Copyright 2026 dds-iswap Contributors
// SPDX-License-Identifier: Apache-2.0

//! Two-qubit state tomography with pre-rotations and Z-basis readout.
//!
//! Each qubit gets one of three pre-rotations before readout:
//!
//! | pre-rotation | Z readout measures |
//! |--------------|--------------------|
//! | identity     | `Z`                |
//! | X90          | `Y`                |
//! | Y90          | `−X`               |
//!
//! Worked example: X90 = exp(−iπ/4·X) takes (|0⟩ + i|1⟩)/√2, the +Y state,
//! to |0⟩, so a +Y state reads 0 and `⟨Z⟩ = +1 = ⟨Y⟩`. Y90 takes |+⟩ to |1⟩,
//! so a +X state reads 1 and `⟨Z⟩ = −1 = −⟨X⟩`.
//!
//! The nine settings give every Pauli product. Expectations are corrected
//! for the symmetric readout error (a factor `1 − 2e` per measured qubit),
//! inverted linearly and projected onto the physical states.

use crate::compiler::{y90, Gate};
use crate::device::{measure_with, readout_probabilities, ReadoutCounts};
use crate::experiment::Experiment;
use crate::harness::CsvTable;
use crate::quantum::{DensityMatrix, Mat4, Pauli1, PauliLabel, Qubit, C64};

use crate::{Error, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PreRotation {
    I,
    X90,
    Y90,
}

impl PreRotation {
    pub const ALL: [PreRotation; 3] = [PreRotation::I, PreRotation::X90, PreRotation::Y90];

    /// Measured Pauli and the sign of the readout.
    pub fn measured(self) -> (Pauli1, f64) {
        match self {
            PreRotation::I => (Pauli1::Z, 1.0),
            PreRotation::X90 => (Pauli1::Y, 1.0),
            PreRotation::Y90 => (Pauli1::X, -1.0),
        }
    }

    pub fn gates(self, q: Qubit) -> Vec<Gate> {
        match self {
            PreRotation::I => vec![],
            PreRotation::X90 => vec![Gate::X90(q)],
            PreRotation::Y90 => y90(q).to_vec(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TomographySetting {
    pub q1: PreRotation,
    pub q2: PreRotation,
}

impl TomographySetting {
    pub fn all() -> Vec<TomographySetting> {
        PreRotation::ALL
            .iter()
            .flat_map(|&q1| PreRotation::ALL.iter().map(move |&q2| TomographySetting { q1, q2 }))
            .collect()
    }

    pub fn gates(&self) -> Vec<Gate> {
        let mut g = self.q1.gates(Qubit::Q1);
        g.extend(self.q2.gates(Qubit::Q2));
        g
    }
}

/// Outcome distribution of one setting, either sampled or exact.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SettingOutcome {
    pub setting: TomographySetting,
    pub probabilities: [f64; 4],
    pub counts: Option<ReadoutCounts>,
}

/// Runs `prep` followed by each setting's pre-rotations. With `shots =
/// None` the outcome probabilities (readout error included) are exact.
pub fn run_settings(
    exp: &Experiment,
    prep: &[Gate],
    settings: &[TomographySetting],
    shots: Option<u64>,
    seed: u64,
    t_start: i64,
) -> Result<Vec<SettingOutcome>> {
    let tails: Vec<Vec<Gate>> = settings.iter().map(|s| s.gates()).collect();
    let states = exp.final_states_with_tails(prep, &tails, t_start)?;
    read_out(&states, settings, exp.device.readout_assignment_error, shots, seed)
}

/// Measures already rotated states, one per setting.
pub fn read_out(
    states: &[DensityMatrix],
    settings: &[TomographySetting],
    assignment_error: f64,
    shots: Option<u64>,
    seed: u64,
) -> Result<Vec<SettingOutcome>> {
    if states.len() != settings.len() {
        return Err(Error::invalid("one state per setting expected"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    settings
        .iter()
        .zip(states)
        .map(|(&setting, rho)| match shots {
            None => Ok(SettingOutcome {
                setting,
                probabilities: readout_probabilities(rho, assignment_error),
                counts: None,
            }),
            Some(n) => {
                let c = measure_with(rho, n, assignment_error, &mut rng)?;
                Ok(SettingOutcome { setting, probabilities: c.fractions(), counts: Some(c) })
            }
        })
        .collect()
}

/// The three settings with the same pre-rotation on both qubits; enough for
/// both single-qubit Bloch vectors.
pub fn local_settings() -> Vec<TomographySetting> {
    PreRotation::ALL.iter().map(|&r| TomographySetting { q1: r, q2: r }).collect()
}

/// Per-qubit Bloch vectors from marginals, corrected for readout error.
pub fn local_bloch_vectors(outcomes: &[SettingOutcome], assignment_error: f64) -> Result<[BlochVector; 2]> {
    let scale = 1.0 - 2.0 * assignment_error;
    if scale <= 0.0 {
        return Err(Error::invalid("assignment error must be below 0.5"));
    }
    let mut out = [[(0.0, 0usize); 3]; 2];
    for o in outcomes {
        let p = o.probabilities;
        let z = [p[0] + p[1] - p[2] - p[3], p[0] - p[1] + p[2] - p[3]];
        for (k, rot) in [o.setting.q1, o.setting.q2].into_iter().enumerate() {
            let (axis, sign) = rot.measured();
            let slot = match axis {
                Pauli1::X => 0,
                Pauli1::Y => 1,
                _ => 2,
            };
            out[k][slot].0 += sign * z[k] / scale;
            out[k][slot].1 += 1;
        }
    }
    let mut vs = [BlochVector { x: 0.0, y: 0.0, z: 0.0 }; 2];
    for (k, v) in vs.iter_mut().enumerate() {
        let mean = |slot: usize| -> Result<f64> {
            let (s, n) = out[k][slot];
            if n == 0 {
                return Err(Error::invalid("settings do not cover all three axes of both qubits"));
            }
            Ok(s / n as f64)
        };
        *v = BlochVector { x: mean(0)?, y: mean(1)?, z: mean(2)? };
    }
    Ok(vs)
}

/// Exact outcome probabilities a state would give under a setting, with no
/// readout error. Used as an oracle.
pub fn ideal_outcome(rho: &DensityMatrix, setting: TomographySetting) -> SettingOutcome {
    let u = crate::compiler::ideal_unitary(&setting.gates());
    let r = crate::quantum::apply(&u, rho);
    SettingOutcome { setting, probabilities: r.populations(), counts: None }
}

/// The 15 non-identity Pauli expectations, keyed by label ("XI", "ZY", …).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PauliExpectations(pub BTreeMap<String, f64>);

impl PauliExpectations {
    pub fn get(&self, label: &PauliLabel) -> f64 {
        self.0.get(&label.to_string()).copied().unwrap_or(0.0)
    }

    pub fn of_state(rho: &DensityMatrix) -> Self {
        Self(
            PauliLabel::non_identity()
                .into_iter()
                .map(|p| (p.to_string(), crate::quantum::pauli::expectation(rho, &p)))
                .collect(),
        )
    }
}

/// Pauli expectations from the nine settings, corrected for readout error.
pub fn expectations(outcomes: &[SettingOutcome], assignment_error: f64) -> Result<PauliExpectations> {
    for s in TomographySetting::all() {
        if !outcomes.iter().any(|o| o.setting == s) {
            return Err(Error::invalid(format!("missing tomography setting {:?}/{:?}", s.q1, s.q2)));
        }
    }
    let scale = 1.0 - 2.0 * assignment_error;
    if scale <= 0.0 {
        return Err(Error::invalid("assignment error must be below 0.5"));
    }
    let mut sums: BTreeMap<String, (f64, usize)> = BTreeMap::new();
    for o in outcomes {
        let p = o.probabilities;
        let (a, sa) = o.setting.q1.measured();
        let (b, sb) = o.setting.q2.measured();
        // ⟨Z1⟩, ⟨Z2⟩, ⟨Z1Z2⟩ of the rotated state
        let z1 = p[0] + p[1] - p[2] - p[3];
        let z2 = p[0] - p[1] + p[2] - p[3];
        let zz = p[0] - p[1] - p[2] + p[3];
        for (label, v) in [
            (PauliLabel::new(a, Pauli1::I), sa * z1 / scale),
            (PauliLabel::new(Pauli1::I, b), sb * z2 / scale),
            (PauliLabel::new(a, b), sa * sb * zz / (scale * scale)),
        ] {
            let e = sums.entry(label.to_string()).or_insert((0.0, 0));
            e.0 += v;
            e.1 += 1;
        }
    }
    Ok(PauliExpectations(sums.into_iter().map(|(k, (s, n))| (k, s / n as f64)).collect()))
}

/// `ρ = ¼ Σ ⟨P⟩ P` without any projection.
pub fn linear_inversion(exp: &PauliExpectations) -> Mat4 {
    let mut m = Mat4::identity();
    for p in PauliLabel::non_identity() {
        m += p.matrix() * C64::new(exp.get(&p), 0.0);
    }
    m * C64::new(0.25, 0.0)
}

pub fn reconstruct_from_expectations(exp: &PauliExpectations) -> DensityMatrix {
    DensityMatrix::project_physical(&linear_inversion(exp))
}

pub fn reconstruct(outcomes: &[SettingOutcome], assignment_error: f64) -> Result<DensityMatrix> {
    Ok(reconstruct_from_expectations(&expectations(outcomes, assignment_error)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    /// Azimuth in the equatorial plane.
    pub fn phase(&self) -> f64 {
        self.y.atan2(self.x)
    }

    pub fn mean(vs: &[BlochVector]) -> BlochVector {
        let n = vs.len().max(1) as f64;
        let s = vs.iter().fold((0.0, 0.0, 0.0), |a, v| (a.0 + v.x, a.1 + v.y, a.2 + v.z));
        BlochVector { x: s.0 / n, y: s.1 / n, z: s.2 / n }
    }
}

pub fn bloch_vector(rho: &DensityMatrix, q: Qubit) -> BlochVector {
    let e = |p: Pauli1| crate::quantum::pauli::expectation(rho, &PauliLabel::single(p, q));
    BlochVector { x: e(Pauli1::X), y: e(Pauli1::Y), z: e(Pauli1::Z) }
}

/// JSON report of one tomography run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TomographyReport {
    pub label: String,
    pub expectations: PauliExpectations,
    /// Row-major `[re, im]` pairs.
    pub matrix: Vec<[f64; 2]>,
    pub bloch_q1: BlochVector,
    pub bloch_q2: BlochVector,
    pub fidelity_to_ideal: Option<f64>,
}

impl TomographyReport {
    pub fn new(label: &str, exp: PauliExpectations, rho: &DensityMatrix, ideal: Option<&DensityMatrix>) -> Result<Self> {
        let m = rho.matrix();
        let matrix = (0..4).flat_map(|i| (0..4).map(move |j| [m[(i, j)].re, m[(i, j)].im])).collect();
        let fidelity_to_ideal = ideal.map(|s| crate::quantum::state_fidelity(rho, s)).transpose()?;
        Ok(Self {
            label: label.to_string(),
            expectations: exp,
            matrix,
            bloch_q1: bloch_vector(rho, Qubit::Q1),
            bloch_q2: bloch_vector(rho, Qubit::Q2),
            fidelity_to_ideal,
        })
    }
}

/// CSV of Bloch vectors: `index, qubit, x, y, z`.
pub fn bloch_table(rows: &[(usize, Qubit, BlochVector)]) -> CsvTable {
    let mut t = CsvTable::new(&["index", "qubit", "x", "y", "z"]);
    for (i, q, v) in rows {
        t.push(vec![*i as f64, q.index() as f64, v.x, v.y, v.z]);
    }
    t
}
