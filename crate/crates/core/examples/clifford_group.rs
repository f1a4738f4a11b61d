// Copyright 2026 dds-iswap Contributors
// SPDX-License-Identifier: Apache-2.0

//! The two-qubit Clifford group over native gates: size, decomposition
//! lengths, composition, the on-disk cache.
//!
//! `cargo run --example clifford_group -- [cache path]`

use dds_iswap::benchmarking::{build_sequence, CliffordGroup};
use dds_iswap::compiler::ideal_unitary;
use dds_iswap::quantum::Unitary;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

fn main() -> dds_iswap::Result<()> {
    let t = Instant::now();
    let g = match std::env::args().nth(1) {
        Some(p) => CliffordGroup::load_or_build(p.as_ref())?,
        None => CliffordGroup::build()?,
    };
    println!("{} elements in {:.2} s, hash {}", g.len(), t.elapsed().as_secs_f64(), &g.content_hash()[..16]);
    let mut hist = std::collections::BTreeMap::new();
    for e in g.elements() {
        *hist.entry(e.decomposition.len()).or_insert(0) += 1;
    }
    println!("generators per element: {hist:?}");

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (a, b) = (g.sample(&mut rng), g.sample(&mut rng));
    let ab = g.compose(a, b);
    println!("a = {:?}", g.element(a).gates());
    println!("b = {:?}", g.element(b).gates());
    println!("a then b = {:?}", g.element(ab).gates());
    println!("a then a⁻¹ is identity: {}", g.compose(a, g.invert(a)) == g.identity());

    let seq = build_sequence(&g, 20, None, &mut rng);
    let u = ideal_unitary(&seq.gates);
    println!("depth-20 sequence: {} native gates, distance from identity {:.1e}", seq.gates.len(), u.distance_up_to_phase(&Unitary::identity()));
    Ok(())
}
