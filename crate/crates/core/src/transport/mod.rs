//! Exact discrete Kantorovich problem: optimal coupling, optimal potentials
//! and the duality-gap certificate.

mod glue;
mod oracle;
mod simplex;

use std::sync::Arc;

use ndarray::Array2;

pub use glue::{glue_couplings, triangle_via_glueing, GlueingCheck, GluedTriple};
pub use oracle::permutation_oracle;

use crate::error::{check_exponent, Error, Result};
use crate::measure::{Coupling, DiscreteMeasure, DualPair};
use crate::space::{cost_matrix, FiniteMetricSpace};
use crate::tol;

/// Optimal coupling and potentials for one pair of measures.
#[derive(Debug, Clone)]
pub struct TransportSolution {
    /// `W_p(mu, nu)^p`.
    pub value: f64,
    pub coupling: Coupling,
    pub duals: DualPair,
    /// Primal minus dual objective.
    pub gap: f64,
    /// Simplex pivots.
    pub iterations: usize,
}

impl TransportSolution {
    pub fn p(&self) -> f64 {
        self.duals.p()
    }

    pub fn wasserstein(&self) -> f64 {
        self.value.powf(1.0 / self.p())
    }

    pub fn cost(&self) -> Array2<f64> {
        self.duals.cost()
    }

    /// Largest `|a[i] + b[j] - c[i][j]|` over cells with mass above
    /// [`tol::SUPPORT`].
    pub fn slackness_violation(&self) -> f64 {
        let cost = self.cost();
        let (a, b) = (self.duals.a(), self.duals.b());
        self.coupling
            .pi()
            .indexed_iter()
            .filter(|(_, &m)| m > tol::SUPPORT)
            .map(|((i, j), _)| (a[i] + b[j] - cost[[i, j]]).abs())
            .fold(0.0, f64::max)
    }

    /// Strong duality and complementary slackness both hold.
    pub fn is_certified(&self) -> bool {
        self.gap >= -tol::FEASIBILITY
            && self.gap <= tol::GAP_RELATIVE * (1.0 + self.value)
            && self.duals.max_violation() <= tol::FEASIBILITY
            && self.slackness_violation() <= tol::SLACKNESS
    }
}

/// Brings two measures onto one space: the shared one when the metrics
/// agree, otherwise the union of their point clouds.
pub(crate) fn common_space(
    mu: &DiscreteMeasure,
    nu: &DiscreteMeasure,
) -> Result<(DiscreteMeasure, DiscreteMeasure)> {
    if Arc::ptr_eq(mu.space(), nu.space()) || mu.space().same_metric(nu.space()) {
        return Ok((mu.clone(), nu.clone()));
    }
    let union = Arc::new(mu.space().union(nu.space())?);
    Ok((mu.embed(union.clone(), 0)?, nu.embed(union, mu.len())?))
}

/// Solves `min <d^p, pi>` over couplings of `mu` and `nu` exactly.
///
/// Zero-weight points are dropped before the simplex runs. Their potentials
/// are filled in afterwards by c-transforms of the surviving ones: first the
/// missing `b` entries from the support of `mu`, then the missing `a` entries
/// from the completed `b`, which keeps the pair feasible on every cell.
pub fn solve_transport(mu: &DiscreteMeasure, nu: &DiscreteMeasure, p: f64) -> Result<TransportSolution> {
    check_exponent(p, 1.0, false)?;
    let (mu, nu) = common_space(mu, nu)?;
    let space: Arc<FiniteMetricSpace> = mu.space().clone();
    let n = space.len();
    let cost = cost_matrix(&space, p)?;

    let rows = mu.support();
    let cols = nu.support();
    let reduced = Array2::from_shape_fn((rows.len(), cols.len()), |(r, c)| cost[[rows[r], cols[c]]]);
    let supply: Vec<f64> = rows.iter().map(|&i| mu.weights()[i]).collect();
    let demand: Vec<f64> = cols.iter().map(|&j| nu.weights()[j]).collect();
    let lp = simplex::solve(&reduced, &supply, &demand)?;

    let mut pi = Array2::zeros((n, n));
    for (r, &i) in rows.iter().enumerate() {
        for (c, &j) in cols.iter().enumerate() {
            pi[[i, j]] = lp.flow[[r, c]];
        }
    }

    let mut a = vec![f64::NAN; n];
    let mut b = vec![f64::NAN; n];
    for (r, &i) in rows.iter().enumerate() {
        a[i] = lp.u[r];
    }
    for (c, &j) in cols.iter().enumerate() {
        b[j] = lp.v[c];
    }
    let col_support: Vec<bool> = (0..n).map(|j| nu.weights()[j] > 0.0).collect();
    let row_support: Vec<bool> = (0..n).map(|i| mu.weights()[i] > 0.0).collect();
    for j in (0..n).filter(|&j| !col_support[j]) {
        b[j] = rows.iter().map(|&i| cost[[i, j]] - a[i]).fold(f64::INFINITY, f64::min);
    }
    for i in (0..n).filter(|&i| !row_support[i]) {
        a[i] = (0..n).map(|j| cost[[i, j]] - b[j]).fold(f64::INFINITY, f64::min);
    }

    let coupling = Coupling::new(pi, mu.clone(), nu.clone())?;
    let value = coupling.cost(&cost);
    let duals = DualPair::new(space, p, a, b)?;
    let gap = value - duals.objective(&mu, &nu);
    Ok(TransportSolution { value, coupling, duals, gap, iterations: lp.iterations })
}

/// `W_p(mu, nu)`.
pub fn wasserstein_p(mu: &DiscreteMeasure, nu: &DiscreteMeasure, p: f64) -> Result<f64> {
    Ok(solve_transport(mu, nu, p)?.wasserstein())
}

/// `<c, pi> - (<a, mu> + <b, nu>)`, recomputed from the stored solution.
pub fn duality_gap(sol: &TransportSolution) -> f64 {
    let primal = sol.coupling.cost(&sol.cost());
    primal - sol.duals.objective(sol.coupling.first(), sol.coupling.second())
}

/// Fails with [`Error::IncompatibleSpaces`] unless all measures share a metric.
pub(crate) fn require_shared_space(measures: &[&DiscreteMeasure]) -> Result<()> {
    let first = measures[0].space();
    if measures.iter().all(|m| Arc::ptr_eq(m.space(), first) || m.space().same_metric(first)) {
        Ok(())
    } else {
        Err(Error::IncompatibleSpaces)
    }
}
