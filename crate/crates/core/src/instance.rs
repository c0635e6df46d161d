//! Seeded random instances for tests, benchmarks and the command line.

use std::sync::Arc;

use rand::seq::index::sample;
use rand::Rng;

use crate::error::{Error, Result};
use crate::measure::DiscreteMeasure;
use crate::rng;
use crate::space::{random_euclidean_space, random_metric_space, FiniteMetricSpace};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpaceKind {
    /// Points uniform in the unit cube of the given dimension.
    Euclidean { dim: usize },
    /// Shortest-path closure of random edge lengths.
    RandomMetric,
}

pub fn random_space(kind: SpaceKind, n: usize, seed: u64) -> Result<FiniteMetricSpace> {
    match kind {
        SpaceKind::Euclidean { dim } => random_euclidean_space(n, dim, seed),
        SpaceKind::RandomMetric => random_metric_space(n, seed),
    }
}

/// Three measures on one space.
#[derive(Debug, Clone)]
pub struct Triple {
    pub space: Arc<FiniteMetricSpace>,
    pub lambda: DiscreteMeasure,
    pub mu: DiscreteMeasure,
    pub nu: DiscreteMeasure,
}

/// Random space of `n` points with three random measures. About one point in
/// five is left out of each support.
pub fn random_triple(kind: SpaceKind, n: usize, seed: u64) -> Result<Triple> {
    let space = Arc::new(random_space(kind, n, seed)?);
    let mut rng = rng::seeded(seed ^ 0x9e37_79b9_7f4a_7c15);
    let lambda = DiscreteMeasure::random(space.clone(), &mut rng, 0.2)?;
    let mu = DiscreteMeasure::random(space.clone(), &mut rng, 0.2)?;
    let nu = DiscreteMeasure::random(space.clone(), &mut rng, 0.2)?;
    Ok(Triple { space, lambda, mu, nu })
}

/// Mixed family used by the sweeps: `n` in `1..=n_max`, alternating between
/// planar clouds and random metrics.
pub fn sweep_triple(n_max: usize, seed: u64) -> Result<Triple> {
    let mut rng = rng::seeded(seed);
    let n = rng.random_range(1..=n_max);
    let kind = if seed.is_multiple_of(2) { SpaceKind::Euclidean { dim: 2 } } else { SpaceKind::RandomMetric };
    random_triple(kind, n, rng.random())
}

/// Uniform measure on `k` distinct points drawn without replacement.
pub fn uniform_on_random_subset<R: Rng>(space: Arc<FiniteMetricSpace>, k: usize, rng: &mut R) -> Result<DiscreteMeasure> {
    if k == 0 || k > space.len() {
        return Err(Error::InvalidMeasure(format!("cannot pick {k} of {} points", space.len())));
    }
    let picked = sample(rng, space.len(), k).into_vec();
    DiscreteMeasure::uniform_on(space, &picked)
}

/// Two uniform measures on disjoint random `n`-subsets of a `2n`-point
/// Euclidean space.
pub fn random_uniform_pair(n: usize, dim: usize, seed: u64) -> Result<(DiscreteMeasure, DiscreteMeasure)> {
    if n == 0 {
        return Err(Error::EmptySpace);
    }
    let space = Arc::new(random_euclidean_space(2 * n, dim, seed)?);
    let mut rng = rng::seeded(seed.wrapping_add(1));
    let picked = sample(&mut rng, 2 * n, 2 * n).into_vec();
    let mu = DiscreteMeasure::uniform_on(space.clone(), &picked[..n])?;
    let nu = DiscreteMeasure::uniform_on(space, &picked[n..])?;
    Ok((mu, nu))
}
