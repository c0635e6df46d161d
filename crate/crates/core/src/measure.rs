//! Probability measures, couplings and dual pairs over a finite metric space.

use std::sync::Arc;

use ndarray::{Array1, Array2, Axis};
use rand::Rng;

use crate::error::{check_exponent, Error, Result};
use crate::space::{cost_matrix, FiniteMetricSpace};
use crate::tol;

/// Nonnegative weights on the points of a space, summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteMeasure {
    space: Arc<FiniteMetricSpace>,
    weights: Vec<f64>,
}

impl DiscreteMeasure {
    pub fn new(space: Arc<FiniteMetricSpace>, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != space.len() {
            return Err(Error::InvalidMeasure(format!(
                "{} weights for a space of {} points",
                weights.len(),
                space.len()
            )));
        }
        if let Some((i, w)) = weights.iter().enumerate().find(|(_, w)| !w.is_finite() || **w < 0.0) {
            return Err(Error::InvalidMeasure(format!("weight {w} at point {i}")));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > tol::MASS {
            return Err(Error::InvalidMeasure(format!("total mass {total} differs from 1")));
        }
        Ok(Self { space, weights })
    }

    pub fn dirac(space: Arc<FiniteMetricSpace>, at: usize) -> Result<Self> {
        space.check_index(at)?;
        let mut weights = vec![0.0; space.len()];
        weights[at] = 1.0;
        Self::new(space, weights)
    }

    /// Uniform measure on the given (distinct) points.
    pub fn uniform_on(space: Arc<FiniteMetricSpace>, points: &[usize]) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidMeasure("uniform measure on an empty set".into()));
        }
        let mut weights = vec![0.0; space.len()];
        let w = 1.0 / points.len() as f64;
        for &i in points {
            space.check_index(i)?;
            if weights[i] != 0.0 {
                return Err(Error::InvalidMeasure(format!("point {i} listed twice")));
            }
            weights[i] = w;
        }
        Self::new(space, weights)
    }

    pub fn uniform(space: Arc<FiniteMetricSpace>) -> Result<Self> {
        let all: Vec<usize> = (0..space.len()).collect();
        Self::uniform_on(space, &all)
    }

    /// Random measure from the seeded generator. Each point is left out of
    /// the support with probability `zero_prob`; at least one point is kept.
    pub fn random<R: Rng>(space: Arc<FiniteMetricSpace>, rng: &mut R, zero_prob: f64) -> Result<Self> {
        let n = space.len();
        let mut raw: Vec<f64> = (0..n)
            .map(|_| {
                let keep = !rng.random_bool(zero_prob.clamp(0.0, 1.0));
                let w: f64 = rng.random_range(0.05..1.0);
                if keep { w } else { 0.0 }
            })
            .collect();
        if raw.iter().all(|&w| w == 0.0) {
            let i = rng.random_range(0..n);
            raw[i] = 1.0;
        }
        let total: f64 = raw.iter().sum();
        raw.iter_mut().for_each(|w| *w /= total);
        Self::new(space, raw)
    }

    pub fn space(&self) -> &Arc<FiniteMetricSpace> {
        &self.space
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Indices carrying positive mass.
    pub fn support(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.weights[i] > 0.0).collect()
    }

    /// `sum_i w[i] * f[i]`.
    pub fn integrate(&self, f: &[f64]) -> f64 {
        self.weights.iter().zip(f).map(|(w, v)| w * v).sum()
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.space.same_metric(&other.space)
            && self.weights.iter().zip(&other.weights).all(|(a, b)| (a - b).abs() <= tol)
    }

    /// The same weights re-indexed into a larger space, starting at `offset`.
    pub(crate) fn embed(&self, target: Arc<FiniteMetricSpace>, offset: usize) -> Result<Self> {
        let mut weights = vec![0.0; target.len()];
        for (i, w) in self.weights.iter().enumerate() {
            weights[offset + i] = *w;
        }
        Self::new(target, weights)
    }
}

/// `sum_i w[i] * d(x0, i)^p`, finite on every finite space.
pub fn p_moment(mu: &DiscreteMeasure, x0: usize, p: f64) -> Result<f64> {
    mu.space.check_index(x0)?;
    check_exponent(p, 1.0, false)?;
    let row = mu.space.dist().row(x0);
    Ok(mu.weights.iter().zip(row).map(|(w, d)| w * d.powf(p)).sum())
}

/// A joint probability matrix with prescribed marginals.
#[derive(Debug, Clone, PartialEq)]
pub struct Coupling {
    pi: Array2<f64>,
    first: DiscreteMeasure,
    second: DiscreteMeasure,
}

impl Coupling {
    pub fn new(pi: Array2<f64>, first: DiscreteMeasure, second: DiscreteMeasure) -> Result<Self> {
        if pi.dim() != (first.len(), second.len()) {
            return Err(Error::Shape(format!(
                "coupling is {:?}, marginals have {} and {} points",
                pi.dim(),
                first.len(),
                second.len()
            )));
        }
        if let Some(v) = pi.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(Error::InvalidMeasure(format!("coupling entry {v}")));
        }
        let coupling = Self { pi, first, second };
        let dev = coupling.marginal_deviation();
        if dev > tol::MARGINAL {
            return Err(Error::InvalidMeasure(format!("coupling marginals off by {dev:e}")));
        }
        Ok(coupling)
    }

    /// Product coupling `first ⊗ second`.
    pub fn product(first: DiscreteMeasure, second: DiscreteMeasure) -> Result<Self> {
        let a = Array1::from(first.weights.clone());
        let b = Array1::from(second.weights.clone());
        let pi = a.insert_axis(Axis(1)).dot(&b.insert_axis(Axis(0)));
        Self::new(pi, first, second)
    }

    pub fn pi(&self) -> &Array2<f64> {
        &self.pi
    }

    pub fn first(&self) -> &DiscreteMeasure {
        &self.first
    }

    pub fn second(&self) -> &DiscreteMeasure {
        &self.second
    }

    /// Largest absolute difference between a row/column sum and its marginal.
    pub fn marginal_deviation(&self) -> f64 {
        let rows = self.pi.sum_axis(Axis(1));
        let cols = self.pi.sum_axis(Axis(0));
        let r = rows.iter().zip(&self.first.weights).map(|(s, w)| (s - w).abs());
        let c = cols.iter().zip(&self.second.weights).map(|(s, w)| (s - w).abs());
        r.chain(c).fold(0.0, f64::max)
    }

    /// `sum_ij pi[i][j] * cost[i][j]`.
    pub fn cost(&self, cost: &Array2<f64>) -> f64 {
        self.pi.iter().zip(cost.iter()).map(|(p, c)| p * c).sum()
    }
}

/// Kantorovich potentials `(a, b)` for the cost `d^p` on one space.
#[derive(Debug, Clone, PartialEq)]
pub struct DualPair {
    space: Arc<FiniteMetricSpace>,
    p: f64,
    a: Vec<f64>,
    b: Vec<f64>,
}

impl DualPair {
    /// Builds a pair and checks `a(x) + b(y) <= d(x, y)^p + FEASIBILITY`.
    pub fn new(space: Arc<FiniteMetricSpace>, p: f64, a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        let pair = Self::new_unchecked(space, p, a, b)?;
        let violation = pair.max_violation();
        if violation > tol::FEASIBILITY {
            return Err(Error::Infeasible { violation });
        }
        Ok(pair)
    }

    /// Builds a pair without the feasibility check. Shapes are still checked.
    pub fn new_unchecked(space: Arc<FiniteMetricSpace>, p: f64, a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        check_exponent(p, 1.0, false)?;
        if a.len() != space.len() || b.len() != space.len() {
            return Err(Error::Shape(format!(
                "potentials of length {} and {} on a space of {} points",
                a.len(),
                b.len(),
                space.len()
            )));
        }
        if a.iter().chain(&b).any(|v| !v.is_finite()) {
            return Err(Error::Domain("dual potentials must be finite".into()));
        }
        Ok(Self { space, p, a, b })
    }

    pub fn space(&self) -> &Arc<FiniteMetricSpace> {
        &self.space
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    /// `max_ij a[i] + b[j] - d(i, j)^p`; nonpositive for a feasible pair.
    pub fn max_violation(&self) -> f64 {
        let n = self.space.len();
        let mut worst = f64::NEG_INFINITY;
        for i in 0..n {
            for j in 0..n {
                let v = self.a[i] + self.b[j] - self.space.d(i, j).powf(self.p);
                worst = worst.max(v);
            }
        }
        worst
    }

    /// `<a, mu> + <b, nu>`.
    pub fn objective(&self, mu: &DiscreteMeasure, nu: &DiscreteMeasure) -> f64 {
        mu.integrate(&self.a) + nu.integrate(&self.b)
    }

    pub fn cost(&self) -> Array2<f64> {
        cost_matrix(&self.space, self.p).expect("exponent validated at construction")
    }
}
