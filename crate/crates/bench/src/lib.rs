//! Fixed workloads shared by the benchmarks.

use otlab_core::{random_triple, random_uniform_pair, DiscreteMeasure, SpaceKind, Triple};

/// Planar instance of `n` points with random weights.
pub fn planar(n: usize, seed: u64) -> Triple {
    random_triple(SpaceKind::Euclidean { dim: 2 }, n, seed).expect("n >= 1")
}

/// Uniform measures on disjoint halves of a `2n`-point cloud: the highly
/// degenerate assignment case.
pub fn assignment(n: usize, seed: u64) -> (DiscreteMeasure, DiscreteMeasure) {
    random_uniform_pair(n, 2, seed).expect("n >= 1")
}
