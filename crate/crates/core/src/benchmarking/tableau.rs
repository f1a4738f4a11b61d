// Copyright 2026 dds-iswap Contributors
// SPDX-License-Identifier: Apache-2.0

//! Two-qubit Pauli operators and Clifford tableaux.
//!
//! A Pauli is stored as `i^phase · X^x Z^z` with one bit per qubit in `x`
//! and `z` (bit 0 is Q1, bit 1 is Q2). A tableau holds the images of the
//! generators `X1, Z1, X2, Z2` under conjugation.

use crate::quantum::{embed, pauli_x, pauli_z, Mat2, Mat4, Qubit, Unitary, C64};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Pauli {
    /// Power of `i`, mod 4.
    pub phase: u8,
    pub x: u8,
    pub z: u8,
}

fn bit(q: Qubit) -> u8 {
    match q {
        Qubit::Q1 => 1,
        Qubit::Q2 => 2,
    }
}

impl Pauli {
    pub const IDENTITY: Pauli = Pauli { phase: 0, x: 0, z: 0 };

    pub fn x_on(q: Qubit) -> Self {
        Self { phase: 0, x: bit(q), z: 0 }
    }

    pub fn z_on(q: Qubit) -> Self {
        Self { phase: 0, x: 0, z: bit(q) }
    }

    /// Generators in tableau order: X1, Z1, X2, Z2.
    pub fn generators() -> [Pauli; 4] {
        [Self::x_on(Qubit::Q1), Self::z_on(Qubit::Q1), Self::x_on(Qubit::Q2), Self::z_on(Qubit::Q2)]
    }

    /// `self · other`.
    pub fn mul(self, other: Pauli) -> Pauli {
        // Z^a X^b = (−1)^{ab} X^b Z^a per qubit
        let swaps = (self.z & other.x).count_ones() as u8;
        Pauli { phase: (self.phase + other.phase + 2 * swaps) % 4, x: self.x ^ other.x, z: self.z ^ other.z }
    }

    /// Number of qubits carrying a Y.
    fn y_count(self) -> u8 {
        (self.x & self.z).count_ones() as u8
    }

    /// Hermitian Paulis are `±` a product of I, X, Y, Z.
    pub fn is_hermitian(self) -> bool {
        (self.phase + 4 - self.y_count() % 4) % 2 == 0
    }

    /// Sign bit of a Hermitian Pauli relative to the product of I, X, Y, Z
    /// (using `Y = iXZ`).
    pub fn sign(self) -> u8 {
        ((self.phase + 4 - self.y_count()) % 4) / 2
    }

    pub fn from_sign(sign: u8, x: u8, z: u8) -> Pauli {
        let y = (x & z).count_ones() as u8;
        Pauli { phase: (y + 2 * sign) % 4, x, z }
    }

    pub fn commutes_with(self, other: Pauli) -> bool {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()) % 2 == 0
    }

    pub fn matrix(self) -> Mat4 {
        let single = |q: Qubit| -> Mat2 {
            let mut m = Mat2::identity();
            if self.x & bit(q) != 0 {
                m = pauli_x();
            }
            if self.z & bit(q) != 0 {
                m *= pauli_z();
            }
            m
        };
        let ph = [C64::new(1.0, 0.0), C64::new(0.0, 1.0), C64::new(-1.0, 0.0), C64::new(0.0, -1.0)][self.phase as usize];
        embed(&single(Qubit::Q1), Qubit::Q1) * embed(&single(Qubit::Q2), Qubit::Q2) * ph
    }
}

/// Conjugation action of a two-qubit Clifford on the generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Tableau {
    pub images: [Pauli; 4],
}

impl Tableau {
    pub fn identity() -> Self {
        Self { images: Pauli::generators() }
    }

    /// `U P U†` for any Pauli `P`.
    pub fn conjugate(&self, p: Pauli) -> Pauli {
        let mut r = Pauli { phase: p.phase, x: 0, z: 0 };
        for (k, q) in Qubit::BOTH.into_iter().enumerate() {
            if p.x & bit(q) != 0 {
                r = r.mul(self.images[2 * k]);
            }
            if p.z & bit(q) != 0 {
                r = r.mul(self.images[2 * k + 1]);
            }
        }
        r
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &Tableau) -> Tableau {
        Tableau { images: self.images.map(|p| next.conjugate(p)) }
    }

    /// Symplectic part: column `g` holds the bits (x1, z1, x2, z2) of image
    /// `g`, packed as bit `4g + row`.
    pub fn symplectic_bits(&self) -> u16 {
        let mut out = 0u16;
        for (g, p) in self.images.iter().enumerate() {
            let col = [p.x & 1, p.z & 1, (p.x >> 1) & 1, (p.z >> 1) & 1];
            for (row, b) in col.iter().enumerate() {
                out |= (*b as u16) << (4 * g + row);
            }
        }
        out
    }

    /// One sign bit per image.
    pub fn sign_bits(&self) -> u8 {
        self.images.iter().enumerate().fold(0, |acc, (g, p)| acc | (p.sign() << g))
    }

    pub fn from_bits(symplectic: u16, signs: u8) -> Tableau {
        let mut images = [Pauli::IDENTITY; 4];
        for (g, img) in images.iter_mut().enumerate() {
            let b = |row: usize| ((symplectic >> (4 * g + row)) & 1) as u8;
            let x = b(0) | (b(2) << 1);
            let z = b(1) | (b(3) << 1);
            *img = Pauli::from_sign((signs >> g) & 1, x, z);
        }
        Tableau { images }
    }

    /// Canonical key: symplectic bits and signs.
    pub fn key(&self) -> u32 {
        (self.symplectic_bits() as u32) | ((self.sign_bits() as u32) << 16)
    }

    /// Hermitian images with the generators' commutation relations.
    pub fn is_valid(&self) -> bool {
        let g = Pauli::generators();
        self.images.iter().all(|p| p.is_hermitian() && (p.x | p.z) != 0)
            && (0..4).all(|a| (0..4).all(|b| g[a].commutes_with(g[b]) == self.images[a].commutes_with(self.images[b])))
    }

    /// Reads the tableau off a unitary by conjugating each generator.
    pub fn from_unitary(u: &Unitary) -> Result<Tableau> {
        let m = u.matrix();
        let mut images = [Pauli::IDENTITY; 4];
        for (g, gen) in Pauli::generators().iter().enumerate() {
            let conj = m * gen.matrix() * m.adjoint();
            images[g] = pauli_of(&conj).ok_or_else(|| Error::invalid("unitary is not a Clifford"))?;
        }
        Ok(Tableau { images })
    }
}

/// The Pauli equal to `m`, if any.
pub fn pauli_of(m: &Mat4) -> Option<Pauli> {
    for x in 0..4u8 {
        for z in 0..4u8 {
            let p = Pauli { phase: 0, x, z };
            let c = (p.matrix().adjoint() * m).trace() / C64::new(4.0, 0.0);
            for (phase, w) in [(0u8, C64::new(1.0, 0.0)), (1, C64::new(0.0, 1.0)), (2, C64::new(-1.0, 0.0)), (3, C64::new(0.0, -1.0))] {
                if (c - w).norm() < 1e-9 {
                    let cand = Pauli { phase, x, z };
                    if (cand.matrix() - m).norm() < 1e-8 {
                        return Some(cand);
                    }
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{iswap_family, single_qubit_x90, virtual_z_unitary};
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn any_pauli() -> impl Strategy<Value = Pauli> {
        (0u8..4, 0u8..4, 0u8..4).prop_map(|(phase, x, z)| Pauli { phase, x, z })
    }

    proptest! {
        #[test]
        fn product_matches_matrices(a in any_pauli(), b in any_pauli()) {
            prop_assert!((a.mul(b).matrix() - a.matrix() * b.matrix()).norm() < 1e-12);
            let comm = (a.matrix() * b.matrix() - b.matrix() * a.matrix()).norm() < 1e-12;
            prop_assert_eq!(a.commutes_with(b), comm);
        }

        #[test]
        fn sign_round_trip(sign in 0u8..2, x in 0u8..4, z in 0u8..4) {
            let p = Pauli::from_sign(sign, x, z);
            prop_assert!(p.is_hermitian());
            prop_assert_eq!(p.sign(), sign);
            prop_assert!((p.matrix() - p.matrix().adjoint()).norm() < 1e-12);
        }
    }

    #[test]
    fn generator_tableaux_conjugate_like_their_unitaries() {
        let us = [
            single_qubit_x90(1, 0.0).unwrap(),
            single_qubit_x90(2, 0.0).unwrap(),
            virtual_z_unitary(PI / 2.0, 0.0),
            virtual_z_unitary(0.0, PI / 2.0),
            iswap_family(PI, 0.0),
        ];
        for u in &us {
            let t = Tableau::from_unitary(u).unwrap();
            assert!(t.is_valid());
            for x in 0..4u8 {
                for z in 0..4u8 {
                    let p = Pauli::from_sign(0, x, z);
                    let want = u.matrix() * p.matrix() * u.matrix().adjoint();
                    assert!((t.conjugate(p).matrix() - want).norm() < 1e-9);
                }
            }
        }
        // X90 on Q1 sends Z1 to −Y1
        let t = Tableau::from_unitary(&us[0]).unwrap();
        assert_eq!(t.images[1], Pauli::from_sign(1, 1, 1));
        assert!(Tableau::from_unitary(&crate::quantum::iswap_family(PI / 2.0, 0.0)).is_err());
    }

    #[test]
    fn composition_order() {
        let a = single_qubit_x90(1, 0.0).unwrap();
        let b = iswap_family(PI, 0.0);
        let ta = Tableau::from_unitary(&a).unwrap();
        let tb = Tableau::from_unitary(&b).unwrap();
        let tab = Tableau::from_unitary(&(&b * &a)).unwrap();
        assert_eq!(ta.then(&tb), tab);
        assert_eq!(Tableau::identity().then(&ta), ta);
    }

    #[test]
    fn bits_round_trip() {
        let t = Tableau::from_unitary(&iswap_family(PI, 0.0)).unwrap();
        assert_eq!(Tableau::from_bits(t.symplectic_bits(), t.sign_bits()), t);
        assert_eq!(Tableau::identity().sign_bits(), 0);
    }
}
