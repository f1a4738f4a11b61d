// Copyright 2026 dds-iswap Contributors
// SPDX-License-Identifier: Apache-2.0

use super::group::{CliffordGroup, Generator};
use crate::compiler::Gate;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Gate interleaved after every random Clifford.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InterleavedGate {
    Iswap,
}

impl InterleavedGate {
    fn generator(self) -> Generator {
        match self {
            InterleavedGate::Iswap => Generator::Iswap,
        }
    }
}

/// Nominal gate durations, ns.
pub fn native_duration_ns(g: &Gate) -> i64 {
    match g {
        Gate::X90(_) => 20,
        Gate::Vz(..) => 0,
        Gate::Iswap | Gate::MinusIswap => 290,
    }
}

pub fn sequence_duration_ns(gates: &[Gate]) -> i64 {
    gates.iter().map(native_duration_ns).sum()
}

#[derive(Debug, Clone, PartialEq)]
pub struct RbSequence {
    /// The `m` random Cliffords followed by the recovery Clifford.
    pub cliffords: Vec<usize>,
    pub interleave: Option<InterleavedGate>,
    pub gates: Vec<Gate>,
}

impl RbSequence {
    /// Native gates grouped per Clifford; interleaved gates form their own
    /// group right after the Clifford they follow.
    pub fn segments(&self, group: &CliffordGroup) -> Vec<Vec<Gate>> {
        let m = self.cliffords.len() - 1;
        let mut out = Vec::new();
        for (k, &c) in self.cliffords.iter().enumerate() {
            out.push(group.element(c).gates());
            if let (Some(g), true) = (self.interleave, k < m) {
                out.push(vec![g.generator().gate()]);
            }
        }
        out
    }
}

/// `m` uniform Cliffords, each followed by the interleaved gate when given,
/// then the Clifford inverting everything before it.
pub fn build_sequence<R: Rng + ?Sized>(
    group: &CliffordGroup,
    m: usize,
    interleave: Option<InterleavedGate>,
    rng: &mut R,
) -> RbSequence {
    let inter = interleave.map(|g| group.generator(g.generator()));
    let mut total = group.identity();
    let mut cliffords = Vec::with_capacity(m + 1);
    let mut gates = Vec::new();
    for _ in 0..m {
        let c = group.sample(rng);
        cliffords.push(c);
        gates.extend(group.element(c).gates());
        total = group.compose(total, c);
        if let (Some(k), Some(g)) = (inter, interleave) {
            gates.push(g.generator().gate());
            total = group.compose(total, k);
        }
    }
    let recovery = group.invert(total);
    cliffords.push(recovery);
    gates.extend(group.element(recovery).gates());
    RbSequence { cliffords, interleave, gates }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compiler::ideal_unitary;
    use crate::quantum::Unitary;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn single_clifford_sequence_is_identity() {
        let g = CliffordGroup::global();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let s = build_sequence(g, 1, None, &mut rng);
        assert_eq!(s.cliffords.len(), 2);
        assert!(ideal_unitary(&s.gates).distance_up_to_phase(&Unitary::identity()) < 1e-9);
    }

    #[test]
    fn random_sequences_are_identity() {
        let g = CliffordGroup::global();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for k in 0..1000 {
            let m = 1 + k % 30;
            let inter = if k % 2 == 0 { Some(InterleavedGate::Iswap) } else { None };
            let s = build_sequence(g, m, inter, &mut rng);
            let d = ideal_unitary(&s.gates).distance_up_to_phase(&Unitary::identity());
            assert!(d < 1e-9, "m = {m}: {d}");
        }
    }

    #[test]
    fn duration_bookkeeping() {
        let g = CliffordGroup::global();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = 30;
        let s = build_sequence(g, m, Some(InterleavedGate::Iswap), &mut rng);
        let iswaps_in_cliffords: usize = s
            .cliffords
            .iter()
            .map(|&c| g.element(c).decomposition.iter().filter(|x| **x == Generator::Iswap).count())
            .sum();
        let x90s = s.gates.iter().filter(|x| matches!(x, Gate::X90(_))).count() as i64;
        let want = 290 * (m + iswaps_in_cliffords) as i64 + 20 * x90s;
        assert_eq!(sequence_duration_ns(&s.gates), want);
        let flat: Vec<Gate> = s.segments(g).concat();
        assert_eq!(flat, s.gates);
        assert_eq!(s.segments(g).len(), 2 * m + 1);
    }
}
