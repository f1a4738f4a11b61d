// Copyright 2026 dds-iswap Contributors
// SPDX-License-Identifier: Apache-2.0

use super::{c, embed, max_abs, DensityMatrix, Mat2, Mat4, Qubit, Unitary};
use super::pauli::{Pauli1, PauliLabel};
use crate::{Error, Result};
use nalgebra::SMatrix;

pub type Superop = SMatrix<super::C64, 16, 16>;

/// Completely positive trace-preserving map in Kraus form.
#[derive(Debug, Clone)]
pub struct NoiseChannel {
    kraus: Vec<Mat4>,
}

impl NoiseChannel {
    pub fn new(kraus: Vec<Mat4>) -> Result<Self> {
        let ch = Self { kraus };
        let dev = max_abs(&(ch.completeness() - Mat4::identity()));
        if dev > super::CHANNEL_TOL {
            return Err(Error::Invariant(format!(
                "Kraus operators are not trace preserving (deviation {dev:e})"
            )));
        }
        Ok(ch)
    }

    pub fn identity() -> Self {
        Self { kraus: vec![Mat4::identity()] }
    }

    pub fn from_unitary(u: &Unitary) -> Self {
        Self { kraus: vec![*u.matrix()] }
    }

    pub fn kraus_operators(&self) -> &[Mat4] {
        &self.kraus
    }

    /// `Σ K†K`.
    pub fn completeness(&self) -> Mat4 {
        self.kraus.iter().map(|k| k.adjoint() * k).sum()
    }

    pub fn apply(&self, rho: &DensityMatrix) -> DensityMatrix {
        let m = rho.matrix();
        let out: Mat4 = self.kraus.iter().map(|k| k * m * k.adjoint()).sum();
        DensityMatrix::from_matrix_unchecked(out)
    }

    /// `self` after `first`.
    pub fn after(&self, first: &NoiseChannel) -> NoiseChannel {
        let mut kraus = Vec::with_capacity(self.kraus.len() * first.kraus.len());
        for a in &self.kraus {
            for b in &first.kraus {
                let k = a * b;
                if max_abs(&k) > 0.0 {
                    kraus.push(k);
                }
            }
        }
        NoiseChannel { kraus }
    }

    /// Liouville representation acting on column-stacked `vec(ρ)`.
    pub fn superoperator(&self) -> Superop {
        let mut s = Superop::zeros();
        for k in &self.kraus {
            // vec(KρK†) = (conj(K) ⊗ K) vec(ρ)
            s += k.conjugate().kronecker(k);
        }
        s
    }
}

/// Amplitude damping (`p = 1 − e^{−t/T1}`) followed by pure dephasing
/// (`λ = 1 − e^{−2t/Tφ}`) on one qubit.
pub fn relaxation_channel(duration: f64, t1: f64, t_phi: f64, qubit: usize) -> Result<NoiseChannel> {
    let q = Qubit::from_index(qubit)?;
    if !(t1 > 0.0) || !(t_phi > 0.0) {
        return Err(Error::invalid(format!(
            "time constants must be positive (T1 = {t1}, Tφ = {t_phi})"
        )));
    }
    if !(duration >= 0.0) {
        return Err(Error::invalid(format!("duration must be ≥ 0, got {duration}")));
    }
    let p = -(-duration / t1).exp_m1();
    let lambda = if t_phi.is_infinite() { 0.0 } else { -(-2.0 * duration / t_phi).exp_m1() };
    let z = c(0.0, 0.0);
    let damp = [
        Mat2::new(c(1.0, 0.0), z, z, c((1.0 - p).sqrt(), 0.0)),
        Mat2::new(z, c(p.sqrt(), 0.0), z, z),
    ];
    let dephase = [
        Mat2::new(c(1.0, 0.0), z, z, c((1.0 - lambda).sqrt(), 0.0)),
        Mat2::new(z, z, z, c(lambda.sqrt(), 0.0)),
    ];
    let mut kraus = Vec::new();
    for d in &dephase {
        for a in &damp {
            let k = d * a;
            if k.iter().any(|x| x.norm() > 0.0) {
                kraus.push(embed(&k, q));
            }
        }
    }
    NoiseChannel::new(kraus)
}

/// Two-qubit depolarizing channel with average gate infidelity `error`:
/// `ρ → (1 − λ)ρ + λ I/4` with `λ = error · d/(d − 1)`, d = 4.
pub fn depolarizing_channel(error: f64) -> Result<NoiseChannel> {
    let lambda = error * 4.0 / 3.0;
    if !(0.0..=16.0 / 15.0).contains(&lambda) {
        return Err(Error::invalid(format!("depolarizing error {error} out of range")));
    }
    let mut kraus = Vec::with_capacity(16);
    for a in Pauli1::ALL {
        for b in Pauli1::ALL {
            let label = PauliLabel::new(a, b);
            let w = if label.is_identity() { 1.0 - 15.0 * lambda / 16.0 } else { lambda / 16.0 };
            if w > 0.0 {
                kraus.push(label.matrix() * c(w.sqrt(), 0.0));
            }
        }
    }
    NoiseChannel::new(kraus)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{iswap_family, StateVector};
    use proptest::prelude::*;

    #[test]
    fn zero_duration_is_identity() {
        let ch = relaxation_channel(0.0, 30e-6, 20e-6, 1).unwrap();
        let rho = StateVector::normalized([c(1., 0.), c(0., 1.), c(1., 0.), c(0.3, 0.)]).unwrap().to_density();
        let out = ch.apply(&rho);
        assert!(max_abs(&(out.matrix() - rho.matrix())) < 1e-15);
    }

    #[test]
    fn long_duration_relaxes_to_ground() {
        let ch = relaxation_channel(1.0, 30e-6, 20e-6, 2).unwrap();
        let out = ch.apply(&DensityMatrix::basis(1, 1));
        assert!((out.populations()[2] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn one_t1_leaves_e_inverse() {
        let ch = relaxation_channel(30e-6, 30e-6, 20e-6, 1).unwrap();
        let out = ch.apply(&DensityMatrix::basis(1, 0));
        assert!((out.excited_population(Qubit::Q1) - (-1.0f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn coherence_decays_at_t2() {
        // 1/T2 = 1/(2 T1) + 1/Tφ
        let (t1, t2) = (30e-6, 20e-6);
        let t_phi = 1.0 / (1.0 / t2 - 0.5 / t1);
        let psi = StateVector::normalized([c(1., 0.), c(0., 0.), c(1., 0.), c(0., 0.)]).unwrap();
        let out = relaxation_channel(t2, t1, t_phi, 1).unwrap().apply(&psi.to_density());
        assert!((out.matrix()[(0, 2)].norm() - 0.5 * (-1.0f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_time_constants() {
        assert!(relaxation_channel(1e-6, 0.0, 1e-5, 1).is_err());
        assert!(relaxation_channel(1e-6, 1e-5, -1.0, 1).is_err());
        assert!(relaxation_channel(1e-6, 1e-5, 1e-5, 0).is_err());
    }

    #[test]
    fn depolarizing_mixes_toward_identity() {
        let ch = depolarizing_channel(0.75).unwrap();
        let out = ch.apply(&DensityMatrix::basis(0, 0));
        assert!(max_abs(&(out.matrix() - DensityMatrix::maximally_mixed().matrix())) < 1e-12);
    }

    #[test]
    fn superoperator_matches_kraus_application() {
        let ch = relaxation_channel(3e-6, 30e-6, 20e-6, 1)
            .unwrap()
            .after(&NoiseChannel::from_unitary(&iswap_family(0.7, 0.2)));
        let rho = StateVector::normalized([c(1., 0.), c(0.2, 1.), c(1., 0.), c(0.3, 0.)]).unwrap().to_density();
        let direct = ch.apply(&rho);
        let v = nalgebra::SVector::<super::super::C64, 16>::from_column_slice(rho.matrix().as_slice());
        let out = ch.superoperator() * v;
        let m = Mat4::from_column_slice(out.as_slice());
        assert!(max_abs(&(m - direct.matrix())) < 1e-12);
    }

    proptest! {
        #[test]
        fn relaxation_is_trace_preserving_and_positive(
            t in 0.0f64..1e-4, t1 in 1e-6f64..1e-4, tphi in 1e-6f64..1e-4, q in 1usize..=2,
            x in -1.0f64..1.0, y in -1.0f64..1.0,
        ) {
            let ch = relaxation_channel(t, t1, tphi, q).unwrap();
            prop_assert!(max_abs(&(ch.completeness() - Mat4::identity())) < 1e-10);
            let psi = StateVector::normalized([c(1., x), c(x, y), c(y, 0.3), c(0.2, x)]).unwrap();
            let out = ch.apply(&psi.to_density());
            prop_assert!(out.validate_with(1e-10, -1e-10).is_ok());
        }
    }
}
