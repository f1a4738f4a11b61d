// Copyright 2026 dds-iswap Contributors
// SPDX-License-Identifier: Apache-2.0

use super::{c, embed, max_abs, DensityMatrix, Mat2, Mat4, Qubit, StateVector, C64, I};
use crate::{Error, Result};
use std::f64::consts::FRAC_1_SQRT_2;
use std::ops::Mul;

/// 4×4 unitary matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Unitary(Mat4);

impl Unitary {
    pub fn new(m: Mat4) -> Result<Self> {
        let dev = max_abs(&(m.adjoint() * m - Mat4::identity()));
        if dev > super::ALGEBRA_TOL {
            return Err(Error::Invariant(format!(
                "matrix is not unitary (‖U†U − I‖ = {dev:e})"
            )));
        }
        Ok(Self(m))
    }

    /// For products of unitaries whose accumulated rounding may exceed the
    /// strict tolerance.
    pub(crate) fn from_matrix_unchecked(m: Mat4) -> Self {
        Self(m)
    }

    pub fn identity() -> Self {
        Self(Mat4::identity())
    }

    pub fn matrix(&self) -> &Mat4 {
        &self.0
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    /// `‖U†U − I‖_max`.
    pub fn unitarity_error(&self) -> f64 {
        max_abs(&(self.0.adjoint() * self.0 - Mat4::identity()))
    }

    /// Removes the global phase so that the first element with modulus above
    /// 1e-9 (column-major scan) is real and positive.
    pub fn gauge_fixed(&self) -> Mat4 {
        let pivot = self.0.iter().find(|z| z.norm() > 1e-9).copied();
        match pivot {
            Some(p) => self.0 * (p.conj() / p.norm()),
            None => self.0,
        }
    }

    /// Max-norm distance after global-phase gauge fixing.
    pub fn distance_up_to_phase(&self, other: &Unitary) -> f64 {
        max_abs(&(self.gauge_fixed() - other.gauge_fixed()))
    }

    /// `|Tr(A†B)| / 4`; equals 1 iff equal up to global phase.
    pub fn overlap(&self, other: &Unitary) -> f64 {
        (self.0.adjoint() * other.0).trace().norm() / 4.0
    }

    /// Average gate fidelity `(d·F_pro + 1)/(d + 1)` with `F_pro = |Tr(A†B)/d|²`.
    pub fn average_gate_fidelity(&self, other: &Unitary) -> f64 {
        let f_pro = self.overlap(other).powi(2);
        (4.0 * f_pro + 1.0) / 5.0
    }
}

impl Mul for &Unitary {
    type Output = Unitary;
    fn mul(self, rhs: &Unitary) -> Unitary {
        Unitary(self.0 * rhs.0)
    }
}

impl Mul for Unitary {
    type Output = Unitary;
    fn mul(self, rhs: Unitary) -> Unitary {
        Unitary(self.0 * rhs.0)
    }
}

/// The parametric exchange family. `theta` is the swap angle Ωτ and `eta`
/// the coupler-drive phase relative to the qubits' phase difference:
///
/// ```text
/// ⎡1      0                 0           0⎤
/// ⎢0  cos θ/2       i e^{iη} sin θ/2    0⎥
/// ⎢0  i e^{-iη} sin θ/2    cos θ/2      0⎥
/// ⎣0      0                 0           1⎦
/// ```
pub fn iswap_family(theta: f64, eta: f64) -> Unitary {
    let (s, co) = (theta / 2.0).sin_cos();
    let mut m = Mat4::identity();
    m[(1, 1)] = c(co, 0.0);
    m[(2, 2)] = c(co, 0.0);
    m[(1, 2)] = I * C64::from_polar(s, eta);
    m[(2, 1)] = I * C64::from_polar(s, -eta);
    Unitary(m)
}

/// π/2 rotation about `cos(phase)·X + sin(phase)·Y` on one qubit.
pub fn single_qubit_x90(qubit: usize, phase: f64) -> Result<Unitary> {
    let q = Qubit::from_index(qubit)?;
    Ok(Unitary(embed(&x90_2x2(phase), q)))
}

pub(crate) fn x90_2x2(phase: f64) -> Mat2 {
    let h = FRAC_1_SQRT_2;
    // cos(π/4)·I − i sin(π/4)·(cos φ X + sin φ Y)
    let off_upper = -I * C64::from_polar(h, -phase);
    let off_lower = -I * C64::from_polar(h, phase);
    Mat2::new(c(h, 0.0), off_upper, off_lower, c(h, 0.0))
}

/// Frame rotation `diag(1, e^{iφ2}, e^{iφ1}, e^{i(φ1+φ2)})`.
pub fn virtual_z_unitary(phi1: f64, phi2: f64) -> Unitary {
    let mut m = Mat4::zeros();
    m[(0, 0)] = c(1.0, 0.0);
    m[(1, 1)] = C64::from_polar(1.0, phi2);
    m[(2, 2)] = C64::from_polar(1.0, phi1);
    m[(3, 3)] = C64::from_polar(1.0, phi1 + phi2);
    Unitary(m)
}

/// Quantum states a unitary can act on.
pub trait Evolvable: Sized {
    fn evolve_by(&self, u: &Unitary) -> Self;
}

impl Evolvable for StateVector {
    fn evolve_by(&self, u: &Unitary) -> Self {
        StateVector::from_vec_unchecked(u.matrix() * self.amplitudes())
    }
}

impl Evolvable for DensityMatrix {
    fn evolve_by(&self, u: &Unitary) -> Self {
        DensityMatrix::from_matrix_unchecked(u.matrix() * self.matrix() * u.matrix().adjoint())
    }
}

/// `U|ψ⟩` or `UρU†`.
pub fn apply<S: Evolvable>(u: &Unitary, s: &S) -> S {
    s.evolve_by(u)
}
