// Copyright 2026 dds-iswap Contributors
// SPDX-License-Identifier: Apache-2.0

use super::{embed, pauli_x, pauli_y, pauli_z, DensityMatrix, Mat2, Mat4, Qubit};
use crate::{Error, Result};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli1 {
    I,
    X,
    Y,
    Z,
}

impl Pauli1 {
    pub const ALL: [Pauli1; 4] = [Pauli1::I, Pauli1::X, Pauli1::Y, Pauli1::Z];

    pub fn matrix(self) -> Mat2 {
        match self {
            Pauli1::I => Mat2::identity(),
            Pauli1::X => pauli_x(),
            Pauli1::Y => pauli_y(),
            Pauli1::Z => pauli_z(),
        }
    }

    fn from_char(ch: char) -> Option<Self> {
        match ch {
            'I' => Some(Pauli1::I),
            'X' => Some(Pauli1::X),
            'Y' => Some(Pauli1::Y),
            'Z' => Some(Pauli1::Z),
            _ => None,
        }
    }

    fn as_char(self) -> char {
        match self {
            Pauli1::I => 'I',
            Pauli1::X => 'X',
            Pauli1::Y => 'Y',
            Pauli1::Z => 'Z',
        }
    }
}

/// Two-qubit Pauli label such as `"XI"`; the left letter acts on Q1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliLabel {
    pub q1: Pauli1,
    pub q2: Pauli1,
}

impl PauliLabel {
    pub fn new(q1: Pauli1, q2: Pauli1) -> Self {
        Self { q1, q2 }
    }

    /// The 15 non-identity labels in lexicographic I, X, Y, Z order.
    pub fn non_identity() -> Vec<PauliLabel> {
        let mut out = Vec::with_capacity(15);
        for a in Pauli1::ALL {
            for b in Pauli1::ALL {
                let l = PauliLabel::new(a, b);
                if !l.is_identity() {
                    out.push(l);
                }
            }
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.q1 == Pauli1::I && self.q2 == Pauli1::I
    }

    pub fn on(&self, qubit: Qubit) -> Pauli1 {
        match qubit {
            Qubit::Q1 => self.q1,
            Qubit::Q2 => self.q2,
        }
    }

    pub fn matrix(&self) -> Mat4 {
        self.q1.matrix().kronecker(&self.q2.matrix())
    }

    pub fn single(p: Pauli1, qubit: Qubit) -> Self {
        match qubit {
            Qubit::Q1 => Self::new(p, Pauli1::I),
            Qubit::Q2 => Self::new(Pauli1::I, p),
        }
    }
}

impl FromStr for PauliLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let chars: Vec<char> = s.chars().collect();
        let parsed = match chars.as_slice() {
            [a, b] => Pauli1::from_char(*a).zip(Pauli1::from_char(*b)),
            _ => None,
        };
        parsed
            .map(|(a, b)| PauliLabel::new(a, b))
            .ok_or_else(|| Error::invalid(format!("malformed Pauli label `{s}`")))
    }
}

impl fmt::Display for PauliLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.q1.as_char(), self.q2.as_char())
    }
}

/// `Tr(ρP)` for a label like `"ZI"`.
pub fn pauli_expectation(rho: &DensityMatrix, label: &str) -> Result<f64> {
    let p: PauliLabel = label.parse()?;
    Ok(expectation(rho, &p))
}

pub(crate) fn expectation(rho: &DensityMatrix, p: &PauliLabel) -> f64 {
    (rho.matrix() * p.matrix()).trace().re
}

#[allow(dead_code)]
pub(crate) fn single_matrix(p: Pauli1, q: Qubit) -> Mat4 {
    embed(&p.matrix(), q)
}
