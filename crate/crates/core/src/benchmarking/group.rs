// Copyright 2026 dds-iswap Contributors
// SPDX-License-Identifier: Apache-2.0

//! The two-qubit Clifford group, generated by breadth-first closure over the
//! native gates.

use super::tableau::Tableau;
use crate::compiler::Gate;
use crate::harness::sha256_hex;
use crate::quantum::Qubit;
use crate::{Error, Result};
use rand::Rng;
use std::collections::HashMap;
use std::f64::consts::PI;
use std::path::Path;
use std::sync::OnceLock;

/// Order of the two-qubit Clifford group modulo phases: `2^4 · |Sp(4, 2)|`.
pub const GROUP_ORDER: usize = 11_520;

const SAFETY_BOUND: usize = 20_000;
const MAGIC: &[u8; 8] = b"DDSCLIF\0";
const VERSION: u32 = 1;

/// Generator of the closure, one byte in the cache file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum Generator {
    X90Q1 = 0,
    X90Q2 = 1,
    SQ1 = 2,
    SQ2 = 3,
    Iswap = 4,
}

impl Generator {
    pub const ALL: [Generator; 5] = [Self::X90Q1, Self::X90Q2, Self::SQ1, Self::SQ2, Self::Iswap];

    pub fn gate(self) -> Gate {
        match self {
            Self::X90Q1 => Gate::X90(Qubit::Q1),
            Self::X90Q2 => Gate::X90(Qubit::Q2),
            Self::SQ1 => Gate::Vz(Qubit::Q1, PI / 2.0),
            Self::SQ2 => Gate::Vz(Qubit::Q2, PI / 2.0),
            Self::Iswap => Gate::Iswap,
        }
    }

    fn from_byte(b: u8) -> Option<Self> {
        Self::ALL.get(b as usize).copied()
    }

    pub fn tableau(self) -> Tableau {
        Tableau::from_unitary(&self.gate().unitary()).expect("native gates are Clifford")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliffordElement {
    pub tableau: Tableau,
    /// Shortest generator word found, applied left to right.
    pub decomposition: Vec<Generator>,
}

impl CliffordElement {
    pub fn gates(&self) -> Vec<Gate> {
        self.decomposition.iter().map(|g| g.gate()).collect()
    }
}

#[derive(Debug, Clone)]
pub struct CliffordGroup {
    elements: Vec<CliffordElement>,
    index: HashMap<u32, usize>,
    inverse: Vec<usize>,
}

impl CliffordGroup {
    /// Breadth-first closure from the identity.
    pub fn build() -> Result<Self> {
        let gens: Vec<(Generator, Tableau)> = Generator::ALL.iter().map(|&g| (g, g.tableau())).collect();
        let id = Tableau::identity();
        let mut elements = vec![CliffordElement { tableau: id, decomposition: Vec::new() }];
        let mut index = HashMap::from([(id.key(), 0usize)]);
        let mut head = 0;
        while head < elements.len() {
            for (g, t) in &gens {
                let next = elements[head].tableau.then(t);
                if index.contains_key(&next.key()) {
                    continue;
                }
                if elements.len() >= SAFETY_BOUND {
                    return Err(Error::Invariant(format!("Clifford closure exceeded {SAFETY_BOUND} elements")));
                }
                let mut decomposition = elements[head].decomposition.clone();
                decomposition.push(*g);
                index.insert(next.key(), elements.len());
                elements.push(CliffordElement { tableau: next, decomposition });
            }
            head += 1;
        }
        Self::from_elements(elements)
    }

    fn from_elements(elements: Vec<CliffordElement>) -> Result<Self> {
        let index: HashMap<u32, usize> = elements.iter().enumerate().map(|(k, e)| (e.tableau.key(), k)).collect();
        if index.len() != elements.len() {
            return Err(Error::Invariant("duplicate Clifford tableaux".into()));
        }
        let mut g = Self { elements, index, inverse: Vec::new() };
        g.inverse = (0..g.len()).map(|k| g.find_inverse(k)).collect::<Result<_>>()?;
        Ok(g)
    }

    /// Process-wide group, built on first use.
    pub fn global() -> &'static CliffordGroup {
        static GROUP: OnceLock<CliffordGroup> = OnceLock::new();
        GROUP.get_or_init(|| Self::build().expect("Clifford closure"))
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn element(&self, k: usize) -> &CliffordElement {
        &self.elements[k]
    }

    pub fn elements(&self) -> &[CliffordElement] {
        &self.elements
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn index_of(&self, t: &Tableau) -> Option<usize> {
        self.index.get(&t.key()).copied()
    }

    pub fn generator(&self, g: Generator) -> usize {
        self.index_of(&g.tableau()).expect("generators are group elements")
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        rng.random_range(0..self.len())
    }

    /// `a` followed by `b`.
    pub fn compose(&self, a: usize, b: usize) -> usize {
        let t = self.elements[a].tableau.then(&self.elements[b].tableau);
        self.index_of(&t).expect("group is closed")
    }

    pub fn invert(&self, a: usize) -> usize {
        self.inverse[a]
    }

    fn find_inverse(&self, a: usize) -> Result<usize> {
        let t = self.elements[a].tableau;
        // S⁻¹ = Ω Sᵀ Ω with Ω swapping x and z of each qubit
        let s = t.symplectic_bits();
        let bit = |row: usize, col: usize| (s >> (4 * col + row)) & 1;
        let omega = |k: usize| k ^ 1;
        let mut inv = 0u16;
        for r in 0..4 {
            for c in 0..4 {
                inv |= bit(omega(c), omega(r)) << (4 * c + r);
            }
        }
        let id = Tableau::identity();
        (0..16u8)
            .map(|signs| Tableau::from_bits(inv, signs))
            .find(|cand| t.then(cand) == id)
            .and_then(|cand| self.index_of(&cand))
            .ok_or_else(|| Error::Invariant(format!("no inverse for Clifford {a}")))
    }

    /// Cache encoding: header (magic, version, count, SHA-256 of the body)
    /// then per element the packed tableau, the sign nibble, a varint
    /// length and one byte per generator.
    pub fn to_bytes(&self) -> Vec<u8> {
        let body = self.body_bytes();
        let mut out = Vec::with_capacity(body.len() + 48);
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&VERSION.to_le_bytes());
        out.extend_from_slice(&(self.len() as u32).to_le_bytes());
        out.extend_from_slice(&hex_decode(&sha256_hex(&body)));
        out.extend_from_slice(&body);
        out
    }

    fn body_bytes(&self) -> Vec<u8> {
        let mut body = Vec::new();
        for e in &self.elements {
            body.extend_from_slice(&e.tableau.symplectic_bits().to_le_bytes());
            body.push(e.tableau.sign_bits());
            let mut n = e.decomposition.len();
            loop {
                let byte = (n & 0x7f) as u8;
                n >>= 7;
                if n == 0 {
                    body.push(byte);
                    break;
                }
                body.push(byte | 0x80);
            }
            body.extend(e.decomposition.iter().map(|g| *g as u8));
        }
        body
    }

    /// SHA-256 of the cache body.
    pub fn content_hash(&self) -> String {
        sha256_hex(&self.body_bytes())
    }

    /// Decodes a cache and checks its hash and every decomposition.
    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let bad = |r: &str| Error::Invariant(format!("Clifford cache: {r}"));
        if bytes.len() < 48 || &bytes[..8] != MAGIC {
            return Err(bad("bad header"));
        }
        let version = u32::from_le_bytes(bytes[8..12].try_into().unwrap());
        if version != VERSION {
            return Err(bad(&format!("unsupported version {version}")));
        }
        let count = u32::from_le_bytes(bytes[12..16].try_into().unwrap()) as usize;
        let body = &bytes[48..];
        if hex_decode(&sha256_hex(body)) != bytes[16..48] {
            return Err(bad("hash mismatch"));
        }
        let gens: Vec<Tableau> = Generator::ALL.iter().map(|g| g.tableau()).collect();
        let mut elements = Vec::with_capacity(count);
        let mut pos = 0;
        let mut take = |n: usize| -> Result<&[u8]> {
            let s = body.get(pos..pos + n).ok_or_else(|| bad("truncated"))?;
            pos += n;
            Ok(s)
        };
        for _ in 0..count {
            let s = take(3)?;
            let tableau = Tableau::from_bits(u16::from_le_bytes([s[0], s[1]]), s[2]);
            let mut len = 0usize;
            let mut shift = 0;
            loop {
                let b = take(1)?[0];
                len |= ((b & 0x7f) as usize) << shift;
                shift += 7;
                if b & 0x80 == 0 {
                    break;
                }
                if shift > 28 {
                    return Err(bad("varint overflow"));
                }
            }
            let decomposition: Vec<Generator> =
                take(len)?.iter().map(|&b| Generator::from_byte(b).ok_or_else(|| bad("unknown gate byte"))).collect::<Result<_>>()?;
            let replay = decomposition.iter().fold(Tableau::identity(), |acc, g| acc.then(&gens[*g as usize]));
            if replay != tableau {
                return Err(bad("decomposition does not match tableau"));
            }
            elements.push(CliffordElement { tableau, decomposition });
        }
        if pos != body.len() {
            return Err(bad("trailing bytes"));
        }
        Self::from_elements(elements)
    }

    /// Loads the cache at `path` when it is valid and matches a fresh
    /// closure; otherwise rebuilds and rewrites it.
    pub fn load_or_build(path: &Path) -> Result<Self> {
        let built = Self::build()?;
        if let Ok(bytes) = std::fs::read(path) {
            if let Ok(cached) = Self::from_bytes(&bytes) {
                if cached.content_hash() == built.content_hash() {
                    return Ok(cached);
                }
            }
        }
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir)?;
        }
        std::fs::write(path, built.to_bytes())?;
        Ok(built)
    }
}

fn hex_decode(s: &str) -> Vec<u8> {
    (0..s.len()).step_by(2).map(|i| u8::from_str_radix(&s[i..i + 2], 16).expect("hex digest")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compiler::ideal_unitary;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// |Sp(2n, 2)| = 2^{n²} Π (4^j − 1), times 4^n sign choices.
    fn clifford_order(n: u32) -> usize {
        let sp: usize = 2usize.pow(n * n) * (1..=n).map(|j| 4usize.pow(j) - 1).product::<usize>();
        sp * 4usize.pow(n)
    }

    #[test]
    fn closure_has_the_clifford_order() {
        let g = CliffordGroup::global();
        assert_eq!(clifford_order(1), 24);
        assert_eq!(clifford_order(2), GROUP_ORDER);
        assert_eq!(g.len(), GROUP_ORDER);
        assert!(g.elements().iter().all(|e| e.tableau.is_valid()));
        assert!(g.element(g.identity()).decomposition.is_empty());
    }

    #[test]
    fn decompositions_reproduce_tableaux() {
        let g = CliffordGroup::global();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let e = g.element(g.sample(&mut rng));
            let u = ideal_unitary(&e.gates());
            assert_eq!(Tableau::from_unitary(&u).unwrap(), e.tableau);
        }
    }

    #[test]
    fn compose_and_invert_round_trip() {
        let g = CliffordGroup::global();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let id = g.identity();
        assert_eq!(g.invert(id), id);
        for _ in 0..10_000 {
            let (a, b) = (g.sample(&mut rng), g.sample(&mut rng));
            assert_eq!(g.compose(a, g.invert(a)), id);
            assert_eq!(g.compose(g.invert(a), a), id);
            let ab = g.compose(a, b);
            assert_eq!(g.compose(ab, g.invert(b)), a);
        }
    }

    #[test]
    fn sampling_is_uniform() {
        let g = CliffordGroup::global();
        let mut rng = ChaCha8Rng::seed_from_u64(2026);
        let n = 100_000;
        let mut counts = vec![0u32; g.len()];
        for _ in 0..n {
            counts[g.sample(&mut rng)] += 1;
        }
        let expect = n as f64 / g.len() as f64;
        let sigma = expect.sqrt();
        assert!(counts.iter().all(|&c| (c as f64 - expect).abs() < 5.0 * sigma));
        let chi2: f64 = counts.iter().map(|&c| (c as f64 - expect).powi(2) / expect).sum();
        let dof = (g.len() - 1) as f64;
        assert!((chi2 - dof).abs() < 5.0 * (2.0 * dof).sqrt(), "χ² = {chi2}");
    }

    #[test]
    fn cache_round_trip_and_corruption() {
        let g = CliffordGroup::global();
        let bytes = g.to_bytes();
        let back = CliffordGroup::from_bytes(&bytes).unwrap();
        assert_eq!(back.elements(), g.elements());
        let mut bad = bytes.clone();
        let last = bad.len() - 1;
        bad[last] ^= 1;
        assert!(CliffordGroup::from_bytes(&bad).is_err());
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cache/clifford.bin");
        CliffordGroup::load_or_build(&path).unwrap();
        assert_eq!(std::fs::read(&path).unwrap(), bytes);
        std::fs::write(&path, b"junk").unwrap();
        assert_eq!(CliffordGroup::load_or_build(&path).unwrap().len(), GROUP_ORDER);
        assert_eq!(std::fs::read(&path).unwrap(), bytes);
    }
}
