//! Finite metric spaces and the cost matrices built on them.

use std::fmt;

use ndarray::{Array2, ArrayView2};
use rand::Rng;
use serde::Serialize;

use crate::error::{check_exponent, Error, Result};
use crate::rng;
use crate::tol;

/// The metric axiom a [`Violation`] refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Axiom {
    Nonnegativity,
    ZeroDiagonal,
    Symmetry,
    Triangle,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Axiom::Nonnegativity => "nonnegativity",
            Axiom::ZeroDiagonal => "zero-diagonal",
            Axiom::Symmetry => "symmetry",
            Axiom::Triangle => "triangle",
        };
        f.write_str(name)
    }
}

/// A failed metric axiom.
///
/// For [`Axiom::Triangle`] the indices are `(i, k, j)` with
/// `d(i, k) > d(i, j) + d(j, k)`; `magnitude` is the excess.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub axiom: Axiom,
    pub indices: Vec<usize>,
    pub magnitude: f64,
}

/// Checks the metric axioms on a square matrix to [`tol::METRIC`].
///
/// Returns [`Error::Shape`] for non-square or non-finite input and
/// [`Error::MetricViolations`] listing every failed axiom otherwise.
pub fn validate_metric(dist: ArrayView2<'_, f64>) -> Result<()> {
    let (rows, cols) = dist.dim();
    if rows != cols {
        return Err(Error::Shape(format!("distance matrix is {rows}x{cols}, expected square")));
    }
    if let Some(((i, j), v)) = dist.indexed_iter().find(|(_, v)| !v.is_finite()) {
        return Err(Error::Shape(format!("non-finite distance {v} at ({i}, {j})")));
    }
    let n = rows;
    let mut violations = Vec::new();
    for i in 0..n {
        let dii = dist[[i, i]];
        if dii.abs() > tol::METRIC {
            violations.push(Violation { axiom: Axiom::ZeroDiagonal, indices: vec![i], magnitude: dii.abs() });
        }
        for j in 0..n {
            let dij = dist[[i, j]];
            if dij < -tol::METRIC {
                violations.push(Violation { axiom: Axiom::Nonnegativity, indices: vec![i, j], magnitude: -dij });
            }
            if i < j {
                let asym = (dij - dist[[j, i]]).abs();
                if asym > tol::METRIC {
                    violations.push(Violation { axiom: Axiom::Symmetry, indices: vec![i, j], magnitude: asym });
                }
            }
        }
    }
    for i in 0..n {
        for k in 0..n {
            if i == k {
                continue;
            }
            for j in 0..n {
                if j == i || j == k {
                    continue;
                }
                let excess = dist[[i, k]] - (dist[[i, j]] + dist[[j, k]]);
                if excess > tol::METRIC {
                    violations.push(Violation { axiom: Axiom::Triangle, indices: vec![i, k, j], magnitude: excess });
                }
            }
        }
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(Error::MetricViolations(violations))
    }
}

/// `n` points with a validated distance matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMetricSpace {
    dist: Array2<f64>,
    labels: Option<Vec<String>>,
    coords: Option<Array2<f64>>,
}

impl FiniteMetricSpace {
    pub fn from_distances(dist: Array2<f64>) -> Result<Self> {
        if dist.nrows() == 0 {
            return Err(Error::EmptySpace);
        }
        validate_metric(dist.view())?;
        Ok(Self { dist, labels: None, coords: None })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.len() {
            return Err(Error::Shape(format!("{} labels for {} points", labels.len(), self.len())));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.dist.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dist(&self) -> &Array2<f64> {
        &self.dist
    }

    pub fn d(&self, i: usize, j: usize) -> f64 {
        self.dist[[i, j]]
    }

    pub fn coords(&self) -> Option<&Array2<f64>> {
        self.coords.as_ref()
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn max_distance(&self) -> f64 {
        self.dist.iter().copied().fold(0.0, f64::max)
    }

    pub(crate) fn check_index(&self, index: usize) -> Result<()> {
        if index < self.len() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index, len: self.len() })
        }
    }

    /// Whether two spaces are the same point set: equal distances and equal
    /// coordinates (or none on both sides).
    pub fn same_metric(&self, other: &Self) -> bool {
        self.dist == other.dist && self.coords == other.coords
    }

    /// Euclidean space on the concatenated point clouds of `self` and `other`.
    ///
    /// Points of `self` keep their indices; points of `other` are shifted by
    /// `self.len()`.
    pub fn union(&self, other: &Self) -> Result<Self> {
        let (a, b) = match (&self.coords, &other.coords) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(Error::IncompatibleSpaces),
        };
        if a.ncols() != b.ncols() {
            return Err(Error::Shape(format!("cannot join {}-d and {}-d point clouds", a.ncols(), b.ncols())));
        }
        let joined = ndarray::concatenate(ndarray::Axis(0), &[a.view(), b.view()])
            .map_err(|e| Error::Shape(e.to_string()))?;
        euclidean_space(joined)
    }
}

/// Builds the space of Euclidean distances between the rows of `coords`.
pub fn euclidean_space(coords: Array2<f64>) -> Result<FiniteMetricSpace> {
    let n = coords.nrows();
    if n == 0 {
        return Err(Error::EmptySpace);
    }
    if coords.iter().any(|v| !v.is_finite()) {
        return Err(Error::Shape("non-finite coordinate".into()));
    }
    let mut dist = Array2::zeros((n, n));
    for i in 0..n {
        for j in (i + 1)..n {
            let d = coords
                .row(i)
                .iter()
                .zip(coords.row(j))
                .map(|(x, y)| (x - y) * (x - y))
                .sum::<f64>()
                .sqrt();
            dist[[i, j]] = d;
            dist[[j, i]] = d;
        }
    }
    let mut space = FiniteMetricSpace::from_distances(dist)?;
    space.coords = Some(coords);
    Ok(space)
}

/// Random metric on `n` points: symmetric edge lengths in `[0.05, 1)` from
/// the seeded generator, replaced by their shortest-path closure.
pub fn random_metric_space(n: usize, seed: u64) -> Result<FiniteMetricSpace> {
    if n == 0 {
        return Err(Error::EmptySpace);
    }
    let mut rng = rng::seeded(seed);
    let mut dist = Array2::zeros((n, n));
    for i in 0..n {
        for j in (i + 1)..n {
            let w: f64 = rng.random_range(0.05..1.0);
            dist[[i, j]] = w;
            dist[[j, i]] = w;
        }
    }
    shortest_path_closure(&mut dist);
    FiniteMetricSpace::from_distances(dist)
}

/// `n` points drawn uniformly from the unit cube `[0, 1]^k`.
pub fn random_euclidean_space(n: usize, k: usize, seed: u64) -> Result<FiniteMetricSpace> {
    if n == 0 {
        return Err(Error::EmptySpace);
    }
    if k == 0 {
        return Err(Error::Shape("dimension must be at least 1".into()));
    }
    let mut rng = rng::seeded(seed);
    let coords = Array2::from_shape_fn((n, k), |_| rng.random::<f64>());
    euclidean_space(coords)
}

/// Floyd-Warshall in place.
fn shortest_path_closure(dist: &mut Array2<f64>) {
    let n = dist.nrows();
    for k in 0..n {
        for i in 0..n {
            let dik = dist[[i, k]];
            for j in 0..n {
                let via = dik + dist[[k, j]];
                if via < dist[[i, j]] {
                    dist[[i, j]] = via;
                }
            }
        }
    }
}

/// Entry `(i, j)` is `d(i, j)^p`.
pub fn cost_matrix(space: &FiniteMetricSpace, p: f64) -> Result<Array2<f64>> {
    check_exponent(p, 1.0, false)?;
    Ok(space.dist.mapv(|d| d.powf(p)))
}
