//! Glueing two couplings through their shared middle marginal, and the
//! classical Minkowski proof of the triangle inequality built on it.

use ndarray::{Array2, Array3, Axis};
use serde::Serialize;

use super::{require_shared_space, solve_transport};
use crate::error::{check_exponent, Error, Result};
use crate::measure::{Coupling, DiscreteMeasure};
use crate::space::cost_matrix;
use crate::tol;

/// A joint measure on three copies of the space with prescribed (1,2) and
/// (2,3) marginals.
#[derive(Debug, Clone)]
pub struct GluedTriple {
    sigma: Array3<f64>,
    lambda: DiscreteMeasure,
    mu: DiscreteMeasure,
    nu: DiscreteMeasure,
}

impl GluedTriple {
    pub fn sigma(&self) -> &Array3<f64> {
        &self.sigma
    }

    pub fn measures(&self) -> (&DiscreteMeasure, &DiscreteMeasure, &DiscreteMeasure) {
        (&self.lambda, &self.mu, &self.nu)
    }

    pub fn marginal_12(&self) -> Array2<f64> {
        self.sigma.sum_axis(Axis(2))
    }

    pub fn marginal_23(&self) -> Array2<f64> {
        self.sigma.sum_axis(Axis(0))
    }

    /// The outer marginal as a validated coupling of `lambda` and `nu`.
    pub fn marginal_13(&self) -> Result<Coupling> {
        Coupling::new(self.sigma.sum_axis(Axis(1)), self.lambda.clone(), self.nu.clone())
    }

    pub fn total_mass(&self) -> f64 {
        self.sigma.sum()
    }
}

/// `sigma[i][j][k] = rho12[i][j] * rho23[j][k] / mu[j]`, zero where `mu[j] = 0`.
pub fn glue_couplings(rho12: &Coupling, rho23: &Coupling) -> Result<GluedTriple> {
    let mu = rho12.second();
    let middle_rows = rho23.pi().sum_axis(Axis(1));
    let middle_cols = rho12.pi().sum_axis(Axis(0));
    if middle_rows.len() != middle_cols.len() {
        return Err(Error::Shape(format!(
            "middle spaces have {} and {} points",
            middle_cols.len(),
            middle_rows.len()
        )));
    }
    let max_deviation = middle_rows
        .iter()
        .zip(middle_cols.iter())
        .map(|(r, c)| (r - c).abs())
        .fold(0.0, f64::max);
    if max_deviation > tol::MARGINAL {
        return Err(Error::Glueing { max_deviation });
    }

    let (n, m) = rho12.pi().dim();
    let k = rho23.pi().ncols();
    let mut sigma = Array3::zeros((n, m, k));
    for j in 0..m {
        let w = mu.weights()[j];
        if w <= 0.0 {
            continue;
        }
        for i in 0..n {
            let left = rho12.pi()[[i, j]];
            if left == 0.0 {
                continue;
            }
            for l in 0..k {
                sigma[[i, j, l]] = left * rho23.pi()[[j, l]] / w;
            }
        }
    }
    Ok(GluedTriple { sigma, lambda: rho12.first().clone(), mu: mu.clone(), nu: rho23.second().clone() })
}

/// Outcome of the glueing route.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GlueingCheck {
    /// `(<d^p, rho13>)^(1/p)` for the glued outer marginal.
    pub bound: f64,
    pub w_lambda_mu: f64,
    pub w_mu_nu: f64,
    pub w_lambda_nu: f64,
    /// Worst deviation of the glued (1,2), (2,3) and (1,3) marginals.
    pub marginal_deviation: f64,
    /// `W_p(lambda, nu) <= bound <= W_p(lambda, mu) + W_p(mu, nu)` with
    /// [`tol::TRIANGLE`] slack on the right.
    pub ok: bool,
}

/// Glues optimal couplings of `(lambda, mu)` and `(mu, nu)`; the outer
/// marginal is a coupling of `(lambda, nu)` whose cost is bounded by
/// Minkowski's inequality.
pub fn triangle_via_glueing(
    lambda: &DiscreteMeasure,
    mu: &DiscreteMeasure,
    nu: &DiscreteMeasure,
    p: f64,
) -> Result<GlueingCheck> {
    check_exponent(p, 1.0, false)?;
    require_shared_space(&[lambda, mu, nu])?;
    let lm = solve_transport(lambda, mu, p)?;
    let mn = solve_transport(mu, nu, p)?;
    let ln = solve_transport(lambda, nu, p)?;

    let glued = glue_couplings(&lm.coupling, &mn.coupling)?;
    let rho13 = glued.marginal_13()?;
    let dev12 = max_abs_diff(&glued.marginal_12(), lm.coupling.pi());
    let dev23 = max_abs_diff(&glued.marginal_23(), mn.coupling.pi());
    let marginal_deviation = dev12.max(dev23).max(rho13.marginal_deviation());

    let cost = cost_matrix(lambda.space(), p)?;
    let bound = rho13.cost(&cost).max(0.0).powf(1.0 / p);
    let (w_lambda_mu, w_mu_nu, w_lambda_nu) = (lm.wasserstein(), mn.wasserstein(), ln.wasserstein());
    let ok = w_lambda_nu <= bound + tol::FEASIBILITY
        && bound <= w_lambda_mu + w_mu_nu + tol::TRIANGLE
        && marginal_deviation <= tol::MARGINAL;
    Ok(GlueingCheck { bound, w_lambda_mu, w_mu_nu, w_lambda_nu, marginal_deviation, ok })
}

fn max_abs_diff(a: &Array2<f64>, b: &Array2<f64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
