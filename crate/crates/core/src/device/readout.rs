// Copyright 2026 dds-iswap Contributors
// SPDX-License-Identifier: Apache-2.0

use crate::quantum::{DensityMatrix, Qubit};
use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Joint readout histogram over 00, 01, 10, 11.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReadoutCounts {
    pub shots: u64,
    pub counts: [u64; 4],
}

impl ReadoutCounts {
    pub fn fractions(&self) -> [f64; 4] {
        self.counts.map(|c| c as f64 / self.shots as f64)
    }

    /// Fraction of shots with `q` read as 0.
    pub fn ground_fraction(&self, q: Qubit) -> f64 {
        let f = self.fractions();
        match q {
            Qubit::Q1 => f[0] + f[1],
            Qubit::Q2 => f[0] + f[2],
        }
    }
}

/// Outcome probabilities after independent per-qubit bit flips.
pub fn readout_probabilities(rho: &DensityMatrix, assignment_error: f64) -> [f64; 4] {
    let p = rho.populations().map(|x| x.max(0.0));
    let e = assignment_error;
    let mut out = [0.0; 4];
    for (true_idx, &pt) in p.iter().enumerate() {
        for (obs, o) in out.iter_mut().enumerate() {
            let flips = (true_idx ^ obs).count_ones();
            *o += pt * e.powi(flips as i32) * (1.0 - e).powi(2 - flips as i32);
        }
    }
    out
}

pub fn measure_with<R: Rng>(
    rho: &DensityMatrix,
    shots: u64,
    assignment_error: f64,
    rng: &mut R,
) -> Result<ReadoutCounts> {
    if shots == 0 {
        return Err(Error::invalid("shots must be positive"));
    }
    let p = rho.populations().map(|x| x.max(0.0));
    let total: f64 = p.iter().sum();
    let mut counts = [0u64; 4];
    for _ in 0..shots {
        let mut u = rng.random::<f64>() * total;
        let mut outcome = 3;
        for (k, &pk) in p.iter().enumerate() {
            if u < pk {
                outcome = k;
                break;
            }
            u -= pk;
        }
        if rng.random::<f64>() < assignment_error {
            outcome ^= 0b10;
        }
        if rng.random::<f64>() < assignment_error {
            outcome ^= 0b01;
        }
        counts[outcome] += 1;
    }
    Ok(ReadoutCounts { shots, counts })
}

/// Multinomial sampling of the diagonal, then per-qubit bit flips.
pub fn measure(rho: &DensityMatrix, shots: u64, assignment_error: f64, seed: u64) -> Result<ReadoutCounts> {
    measure_with(rho, shots, assignment_error, &mut ChaCha8Rng::seed_from_u64(seed))
}
