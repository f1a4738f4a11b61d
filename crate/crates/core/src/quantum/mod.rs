// Copyright 2026 dds-iswap Contributors
// SPDX-License-Identifier: Apache-2.0

//! Two-qubit linear algebra.
//!
//! Basis ordering is fixed to |00⟩, |01⟩, |10⟩, |11⟩ with qubit Q1 as the
//! left label, so the index of |b1 b2⟩ is `2*b1 + b2`. The parametric
//! exchange acts on the middle |01⟩/|10⟩ block.

mod channel;
pub(crate) mod pauli;
mod state;
mod unitary;

pub use channel::{depolarizing_channel, relaxation_channel, NoiseChannel, Superop};
pub use pauli::{pauli_expectation, Pauli1, PauliLabel};
pub use state::{state_fidelity, trace_distance, DensityMatrix, StateVector};
pub use unitary::{
    apply, iswap_family, single_qubit_x90, virtual_z_unitary, Evolvable, Unitary,
};

use nalgebra::{Matrix2, Matrix4, Vector4};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type Mat2 = Matrix2<C64>;
pub type Mat4 = Matrix4<C64>;
pub type Vec4 = Vector4<C64>;

/// Tolerance for pure algebra (unitaries, states).
pub const ALGEBRA_TOL: f64 = 1e-12;
/// Tolerance for channel algebra (Kraus completeness, trace preservation).
pub const CHANNEL_TOL: f64 = 1e-10;

pub(crate) const I: C64 = C64::new(0.0, 1.0);

pub(crate) fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// One of the two transmons.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[derive(serde::Serialize, serde::Deserialize)]
pub enum Qubit {
    Q1,
    Q2,
}

impl Qubit {
    pub const BOTH: [Qubit; 2] = [Qubit::Q1, Qubit::Q2];

    /// Accepts the 1-based labels used throughout the experiment (1 or 2).
    pub fn from_index(index: usize) -> crate::Result<Self> {
        match index {
            1 => Ok(Qubit::Q1),
            2 => Ok(Qubit::Q2),
            other => Err(crate::Error::invalid(format!(
                "qubit index must be 1 or 2, got {other}"
            ))),
        }
    }

    pub fn index(self) -> usize {
        match self {
            Qubit::Q1 => 1,
            Qubit::Q2 => 2,
        }
    }

    pub fn other(self) -> Self {
        match self {
            Qubit::Q1 => Qubit::Q2,
            Qubit::Q2 => Qubit::Q1,
        }
    }

    /// Bit value of this qubit in basis index `k`.
    pub fn bit(self, k: usize) -> usize {
        match self {
            Qubit::Q1 => (k >> 1) & 1,
            Qubit::Q2 => k & 1,
        }
    }
}

/// Lifts a single-qubit operator onto the two-qubit space.
pub fn embed(op: &Mat2, qubit: Qubit) -> Mat4 {
    let id = Mat2::identity();
    match qubit {
        Qubit::Q1 => op.kronecker(&id),
        Qubit::Q2 => id.kronecker(op),
    }
}

pub(crate) fn max_abs(m: &Mat4) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn pauli_x() -> Mat2 {
    Mat2::new(c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.))
}

pub fn pauli_y() -> Mat2 {
    Mat2::new(c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.))
}

pub fn pauli_z() -> Mat2 {
    Mat2::new(c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.))
}

/// |0⟩⟨1|, lowers the qubit.
pub fn sigma_minus() -> Mat2 {
    Mat2::new(c(0., 0.), c(1., 0.), c(0., 0.), c(0., 0.))
}
