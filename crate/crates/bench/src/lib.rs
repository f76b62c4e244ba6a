//! Fixtures shared by the benchmarks.

use streamcut::{generate_cl, generate_hp, ClParams, Graph, HpParams};

/// Dense planted-partition graph, about 575k edges.
pub fn hidden_partition(seed: u64) -> Graph {
    generate_hp(&HpParams { n: 1500, k: 4, p: 0.8, q: 0.5, seed })
        .expect("valid parameters")
        .graph
}

/// Sparse power-law graph, mean degree 10.
pub fn power_law(seed: u64) -> Graph {
    generate_cl(&ClParams::new(20_000, 2.5, seed))
        .expect("valid parameters")
        .graph
}

pub fn small_random(n: usize, seed: u64) -> Graph {
    let g = generate_hp(&HpParams { n, k: 2, p: 0.6, q: 0.2, seed }).expect("valid parameters");
    g.graph
}
