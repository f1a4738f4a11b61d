// Copyright 2026 dds-iswap Contributors
// SPDX-License-Identifier: Apache-2.0

use super::{c, max_abs, Mat4, Qubit, Vec4, C64};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Normalized two-qubit pure state.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector(Vec4);

impl StateVector {
    pub fn new(amplitudes: [C64; 4]) -> Result<Self> {
        let v = Vec4::from(amplitudes);
        let norm: f64 = v.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > super::ALGEBRA_TOL {
            return Err(Error::Invariant(format!(
                "state vector norm² is {norm}, expected 1"
            )));
        }
        Ok(Self(v))
    }

    /// Normalizes arbitrary nonzero amplitudes.
    pub fn normalized(amplitudes: [C64; 4]) -> Result<Self> {
        let v = Vec4::from(amplitudes);
        let n = v.norm();
        if n == 0.0 {
            return Err(Error::invalid("zero state vector"));
        }
        Ok(Self(v / c(n, 0.0)))
    }

    /// Computational basis state |b1 b2⟩.
    pub fn basis(b1: u8, b2: u8) -> Self {
        assert!(b1 < 2 && b2 < 2, "basis labels are bits");
        let mut v = Vec4::zeros();
        v[2 * b1 as usize + b2 as usize] = c(1.0, 0.0);
        Self(v)
    }

    pub fn ground() -> Self {
        Self::basis(0, 0)
    }

    pub(crate) fn from_vec_unchecked(v: Vec4) -> Self {
        Self(v)
    }

    pub fn amplitudes(&self) -> &Vec4 {
        &self.0
    }

    pub fn inner(&self, other: &StateVector) -> C64 {
        self.0.dotc(&other.0)
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix(self.0 * self.0.adjoint())
    }
}

/// Two-qubit density matrix. Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RowMajor", into = "RowMajor")]
pub struct DensityMatrix(Mat4);

impl DensityMatrix {
    pub fn new(m: Mat4) -> Result<Self> {
        let rho = Self(m);
        rho.validate()?;
        Ok(rho)
    }

    pub(crate) fn from_matrix_unchecked(m: Mat4) -> Self {
        Self(m)
    }

    pub fn maximally_mixed() -> Self {
        Self(Mat4::identity() * c(0.25, 0.0))
    }

    pub fn basis(b1: u8, b2: u8) -> Self {
        StateVector::basis(b1, b2).to_density()
    }

    pub fn matrix(&self) -> &Mat4 {
        &self.0
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    /// Diagonal populations of |00⟩, |01⟩, |10⟩, |11⟩.
    pub fn populations(&self) -> [f64; 4] {
        [0, 1, 2, 3].map(|k| self.0[(k, k)].re)
    }

    /// Probability that `qubit` reads 0.
    pub fn ground_population(&self, qubit: Qubit) -> f64 {
        let p = self.populations();
        (0..4).filter(|&k| qubit.bit(k) == 0).map(|k| p[k]).sum()
    }

    /// Probability that `qubit` reads 1.
    pub fn excited_population(&self, qubit: Qubit) -> f64 {
        1.0 - self.ground_population(qubit)
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> [f64; 4] {
        let mut e: Vec<f64> = self.0.symmetric_eigenvalues().iter().copied().collect();
        e.sort_by(f64::total_cmp);
        [e[0], e[1], e[2], e[3]]
    }

    pub fn purity(&self) -> f64 {
        (self.0 * self.0).trace().re
    }

    pub fn validate(&self) -> Result<()> {
        self.validate_with(super::ALGEBRA_TOL, -1e-10)
    }

    /// Checks Hermiticity and trace within `tol`, eigenvalues above `floor`.
    pub fn validate_with(&self, tol: f64, floor: f64) -> Result<()> {
        let herm = max_abs(&(self.0 - self.0.adjoint()));
        if herm > tol {
            return Err(Error::Invariant(format!(
                "density matrix not Hermitian (deviation {herm:e})"
            )));
        }
        let tr = self.trace();
        if (tr.re - 1.0).abs() > tol || tr.im.abs() > tol {
            return Err(Error::Invariant(format!("density matrix trace is {tr}")));
        }
        let min = self.eigenvalues()[0];
        if min < floor {
            return Err(Error::Invariant(format!(
                "density matrix has negative eigenvalue {min:e}"
            )));
        }
        Ok(())
    }

    /// Nearest unit-trace PSD matrix: eigenvalue clipping then renormalization.
    pub fn project_physical(m: &Mat4) -> Self {
        let herm = (m + m.adjoint()) * c(0.5, 0.0);
        let eig = herm.symmetric_eigen();
        let clipped: Vec<f64> = eig.eigenvalues.iter().map(|&l| l.max(0.0)).collect();
        let total: f64 = clipped.iter().sum();
        let mut out = Mat4::zeros();
        if total <= 0.0 {
            return Self::maximally_mixed();
        }
        for (k, lam) in clipped.iter().enumerate() {
            if *lam == 0.0 {
                continue;
            }
            let v = eig.eigenvectors.column(k);
            out += v * v.adjoint() * c(lam / total, 0.0);
        }
        Self(out)
    }

    /// Hermitian square root, with tiny negative eigenvalues clipped.
    pub(crate) fn sqrt_matrix(&self) -> Mat4 {
        hermitian_sqrt(&self.0)
    }
}

pub(crate) fn hermitian_sqrt(m: &Mat4) -> Mat4 {
    let eig = m.symmetric_eigen();
    let mut out = Mat4::zeros();
    for k in 0..4 {
        let lam = eig.eigenvalues[k].max(0.0).sqrt();
        let v = eig.eigenvectors.column(k);
        out += v * v.adjoint() * c(lam, 0.0);
    }
    out
}

/// Uhlmann fidelity `(Tr √(√ρ σ √ρ))²`.
pub fn state_fidelity(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    a.validate_with(1e-9, -1e-8)?;
    b.validate_with(1e-9, -1e-8)?;
    // For a pure argument the fidelity is exactly Tr(ρσ); the eigen route
    // loses ~1e-8 to square roots of round-off eigenvalues.
    if a.purity() > 1.0 - 1e-12 || b.purity() > 1.0 - 1e-12 {
        return Ok((a.matrix() * b.matrix()).trace().re.clamp(0.0, 1.0));
    }
    let sa = a.sqrt_matrix();
    let inner = sa * b.matrix() * sa;
    let inner = (inner + inner.adjoint()) * c(0.5, 0.0);
    let tr: f64 = inner
        .symmetric_eigenvalues()
        .iter()
        .map(|&l| l.max(0.0).sqrt())
        .sum();
    Ok((tr * tr).clamp(0.0, 1.0))
}

/// Trace distance ½‖a − b‖₁.
pub fn trace_distance(a: &DensityMatrix, b: &DensityMatrix) -> f64 {
    let d = a.matrix() - b.matrix();
    0.5 * d.symmetric_eigenvalues().iter().map(|l| l.abs()).sum::<f64>()
}

#[derive(Serialize, Deserialize)]
struct RowMajor {
    /// Row-major `[re, im]` pairs.
    entries: Vec<[f64; 2]>,
}

impl From<DensityMatrix> for RowMajor {
    fn from(rho: DensityMatrix) -> Self {
        let mut entries = Vec::with_capacity(16);
        for r in 0..4 {
            for col in 0..4 {
                let z = rho.0[(r, col)];
                entries.push([z.re, z.im]);
            }
        }
        RowMajor { entries }
    }
}

impl TryFrom<RowMajor> for DensityMatrix {
    type Error = Error;

    fn try_from(rm: RowMajor) -> Result<Self> {
        if rm.entries.len() != 16 {
            return Err(Error::invalid("density matrix needs 16 entries"));
        }
        let m = Mat4::from_fn(|r, col| {
            let [re, im] = rm.entries[4 * r + col];
            c(re, im)
        });
        DensityMatrix::new(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fidelity_of_identical_and_orthogonal_states() {
        let a = DensityMatrix::basis(0, 1);
        let b = DensityMatrix::basis(1, 0);
        assert!((state_fidelity(&a, &a).unwrap() - 1.0).abs() < 1e-12);
        assert!(state_fidelity(&a, &b).unwrap() < 1e-12);
    }

    #[test]
    fn fidelity_matches_overlap_for_pure_states() {
        let psi = StateVector::normalized([c(1., 0.), c(0.3, -0.2), c(0., 0.5), c(0.1, 0.1)]).unwrap();
        let phi = StateVector::normalized([c(0.2, 0.1), c(1., 0.), c(-0.4, 0.), c(0., 0.7)]).unwrap();
        let oracle = psi.inner(&phi).norm_sqr();
        let f = state_fidelity(&psi.to_density(), &phi.to_density()).unwrap();
        assert!((f - oracle).abs() < 1e-9, "{f} vs {oracle}");
    }

    #[test]
    fn rejects_unnormalized_state() {
        assert!(StateVector::new([c(1., 0.), c(1., 0.), c(0., 0.), c(0., 0.)]).is_err());
    }

    #[test]
    fn projection_clips_negative_eigenvalues() {
        let mut m = *DensityMatrix::basis(0, 0).matrix();
        m[(1, 1)] = c(-0.1, 0.0);
        let rho = DensityMatrix::project_physical(&m);
        rho.validate().unwrap();
        assert!((rho.populations()[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn json_round_trip() {
        let rho = StateVector::normalized([c(1., 0.), c(0., 1.), c(0., 0.), c(0., 0.)])
            .unwrap()
            .to_density();
        let s = serde_json::to_string(&rho).unwrap();
        let back: DensityMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(rho, back);
    }
}
