//! The duality proof of the triangle inequality for `W_p`, executed on data.
//!
//! Given conjugate optimal potentials `(alpha, gamma)` for `(lambda, nu)`,
//! the potential
//!
//! ```text
//! beta(y) = K min_z ( d(y, z)^p - gamma(z) / K ),     K = 1 + f(eta)
//! ```
//!
//! makes `(alpha, -beta) / (1 + eta)` feasible for `(lambda, mu)` and
//! `(beta, gamma) / K` feasible for `(mu, nu)`. Weak duality on both pairs
//! bounds `W_p(lambda, nu)^p` by `(1 + eta) W_p(lambda, mu)^p + K W_p(mu, nu)^p`
//! for every `eta > 0`, and the choice of [`choose_eta`] turns the right side
//! into `(W_p(lambda, mu) + W_p(mu, nu))^p`.

use serde::Serialize;

use super::scalar::{check_p_eta, choose_eta, EtaWeights};
use crate::conjugacy::{conjugate_normalize, is_dp_concave, kr_potential, p_legendre, Potential};
use crate::error::{check_exponent, Error, Result};
use crate::measure::{p_moment, DiscreteMeasure};
use crate::transport::{require_shared_space, solve_transport};
use crate::tol;

/// `beta_eta = K (gamma / K)^[p*]` with `K = 1 + f(eta)`.
pub fn beta_eta(gamma: &Potential, eta: f64) -> Result<Potential> {
    check_p_eta(gamma.p(), eta)?;
    let k = EtaWeights::new(gamma.p(), eta)?.right;
    Ok(p_legendre(&gamma.scaled(k.recip()))?.scaled(k))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaBoundReport {
    /// `max_{x,y} alpha(x) - beta(y) - (1 + eta) d(x, y)^p`.
    pub max_violation: f64,
    /// Same, each term divided by `1 + |alpha(x)| + |beta(y)|`.
    pub max_scaled_violation: f64,
    pub worst_pair: (usize, usize),
}

impl LemmaBoundReport {
    pub fn holds(&self) -> bool {
        self.max_scaled_violation <= tol::FEASIBILITY
    }
}

/// Scans `alpha(x) - beta(y) <= (1 + eta) d(x, y)^p` over all pairs.
///
/// `alpha` must be the transform of `gamma`; it is recomputed here and a
/// mismatch is reported as [`Error::PotentialMismatch`].
pub fn lemma_bound_check(alpha: &Potential, beta: &Potential, gamma: &Potential, eta: f64) -> Result<LemmaBoundReport> {
    let p = gamma.p();
    check_p_eta(p, eta)?;
    let n = gamma.len();
    if alpha.len() != n || beta.len() != n || !alpha.space().same_metric(gamma.space()) || !beta.space().same_metric(gamma.space()) {
        return Err(Error::Shape("alpha, beta and gamma must live on the same space".into()));
    }
    let expected = p_legendre(gamma)?;
    let max_deviation = expected.max_abs_diff(alpha);
    if max_deviation > tol::CONJUGATE {
        return Err(Error::PotentialMismatch { max_deviation });
    }
    let alpha = expected.to_finite()?;
    let beta = beta.to_finite()?;
    let space = gamma.space();
    let factor = 1.0 + eta;
    let mut report = LemmaBoundReport {
        max_violation: f64::NEG_INFINITY,
        max_scaled_violation: f64::NEG_INFINITY,
        worst_pair: (0, 0),
    };
    for (x, ax) in alpha.iter().enumerate() {
        for (y, by) in beta.iter().enumerate() {
            let v = ax - by - factor * space.d(x, y).powf(p);
            let scaled = v / (1.0 + ax.abs() + by.abs());
            report.max_violation = report.max_violation.max(v);
            if scaled > report.max_scaled_violation {
                report.max_scaled_violation = scaled;
                report.worst_pair = (x, y);
            }
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntegrabilityReport {
    /// `sum_y mu(y) |beta(y)|`.
    pub lhs: f64,
    /// `2^(p-1) K (M_p(mu, x0) + M_p(nu, x0)) + sum_z nu(z) |gamma(z)|`.
    pub rhs: f64,
    pub holds: bool,
}

/// Compares the `mu`-integral of `|beta|` with the moment bound used to show
/// that `beta` is integrable.
pub fn beta_integrability_bound(
    beta: &Potential,
    gamma: &Potential,
    mu: &DiscreteMeasure,
    nu: &DiscreteMeasure,
    eta: f64,
    x0: usize,
) -> Result<IntegrabilityReport> {
    let p = gamma.p();
    let k = EtaWeights::new(p, eta)?.right;
    let beta = beta.to_finite()?;
    let abs_gamma: Vec<f64> = gamma.to_finite()?.iter().map(|g| g.abs()).collect();
    let lhs: f64 = mu.weights().iter().zip(&beta).map(|(w, b)| w * b.abs()).sum();
    let moments = p_moment(mu, x0, p)? + p_moment(nu, x0, p)?;
    let rhs = 2f64.powf(p - 1.0) * k * moments + nu.integrate(&abs_gamma);
    Ok(IntegrabilityReport { lhs, rhs, holds: lhs <= rhs + tol::FEASIBILITY })
}

/// Which argument produced a [`ChainReport`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    /// `p > 1`, both outer distances positive: the full duality chain.
    Duality,
    /// One of `W(lambda, mu)`, `W(mu, nu)` vanishes.
    Trivial,
    /// `p = 1` through a single 1-Lipschitz potential.
    KantorovichRubinstein,
}

/// Every intermediate quantity of one certification run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainReport {
    pub p: f64,
    pub branch: Branch,
    /// Absent on the trivial and p = 1 branches.
    pub eta: Option<f64>,
    /// `1 + f(eta)`.
    pub coefficient: Option<f64>,
    pub w_lambda_mu: f64,
    pub w_mu_nu: f64,
    pub w_lambda_nu: f64,
    /// `|<alpha, lambda> + <gamma, nu> - W(lambda, nu)^p|`; for p = 1 the
    /// same with the Kantorovich-Rubinstein objective.
    pub dual_objective_residual: f64,
    /// Scaled pointwise violation of `alpha(x) - beta(y) <= (1+eta) d^p`;
    /// for p = 1 the Lipschitz excess `max |phi(x) - phi(y)| - d(x, y)`.
    pub lemma_bound_max_violation: f64,
    pub worst_pair: Option<(usize, usize)>,
    /// `(1+eta) W(lambda,mu)^p - (<alpha,lambda> - <beta,mu>)`.
    pub ineq_wlamu_slack: f64,
    /// `K W(mu,nu)^p - (<beta,mu> + <gamma,nu>)`.
    pub ineq_wmunu_slack: f64,
    /// `(1+eta) W(lambda,mu)^p + K W(mu,nu)^p`.
    pub rhs_eta: f64,
    /// `(W(lambda,mu) + W(mu,nu))^p`.
    pub rhs_collapsed: f64,
    /// `|rhs_eta - rhs_collapsed| / rhs_collapsed`.
    pub collapse_residual: f64,
    /// `W(lambda,mu) + W(mu,nu) - W(lambda,nu)`.
    pub triangle_slack: f64,
    pub integrability: Option<IntegrabilityReport>,
    /// `beta / K` passed the double-transform test.
    pub beta_dp_concave: Option<bool>,
    pub certified: bool,
}

impl ChainReport {
    /// `(1+eta) W(lambda,mu)^p + (1+f(eta)) W(mu,nu)^p - W(lambda,nu)^p` for
    /// an arbitrary `eta > 0`.
    pub fn ineq_eta_slack(&self, eta: f64) -> Result<f64> {
        let w = EtaWeights::new(self.p, eta)?;
        let p = self.p;
        Ok(w.left * self.w_lambda_mu.powf(p) + w.right * self.w_mu_nu.powf(p) - self.w_lambda_nu.powf(p))
    }

    fn trivial(p: f64, w_lambda_mu: f64, w_mu_nu: f64, w_lambda_nu: f64, dual_objective_residual: f64) -> Self {
        let rhs = (w_lambda_mu + w_mu_nu).powf(p);
        let triangle_slack = w_lambda_mu + w_mu_nu - w_lambda_nu;
        Self {
            p,
            branch: Branch::Trivial,
            eta: None,
            coefficient: None,
            w_lambda_mu,
            w_mu_nu,
            w_lambda_nu,
            dual_objective_residual,
            lemma_bound_max_violation: 0.0,
            worst_pair: None,
            ineq_wlamu_slack: 0.0,
            ineq_wmunu_slack: 0.0,
            rhs_eta: rhs,
            rhs_collapsed: rhs,
            collapse_residual: 0.0,
            triangle_slack,
            integrability: None,
            beta_dp_concave: None,
            certified: triangle_slack >= -tol::TRIANGLE,
        }
    }
}

/// Certifies `W_p(lambda, nu) <= W_p(lambda, mu) + W_p(mu, nu)` for `p > 1`
/// through Kantorovich duality alone.
pub fn certify_triangle(lambda: &DiscreteMeasure, mu: &DiscreteMeasure, nu: &DiscreteMeasure, p: f64) -> Result<ChainReport> {
    run_chain(lambda, mu, nu, p, None)
}

/// Runs the same chain at a fixed `eta > 0`. The outcome is the weighted
/// bound `W_p(lambda, nu)^p <= (1 + eta) W_p(lambda, mu)^p + (1 + f(eta)) W_p(mu, nu)^p`,
/// so `certified` requires that bound and not the collapse onto the sum of
/// distances, which only the optimal `eta` achieves.
pub fn certify_triangle_at_eta(
    lambda: &DiscreteMeasure,
    mu: &DiscreteMeasure,
    nu: &DiscreteMeasure,
    p: f64,
    eta: f64,
) -> Result<ChainReport> {
    check_p_eta(p, eta)?;
    run_chain(lambda, mu, nu, p, Some(eta))
}

fn run_chain(
    lambda: &DiscreteMeasure,
    mu: &DiscreteMeasure,
    nu: &DiscreteMeasure,
    p: f64,
    fixed_eta: Option<f64>,
) -> Result<ChainReport> {
    check_p_eta(p, 1.0)?;
    require_shared_space(&[lambda, mu, nu])?;
    let space = lambda.space().clone();

    let ln = solve_transport(lambda, nu, p)?;
    let conj = conjugate_normalize(&ln.duals)?;
    let alpha = Potential::finite(space.clone(), p, conj.a().to_vec())?;
    let gamma = Potential::finite(space.clone(), p, conj.b().to_vec())?;
    let alpha_int = alpha.integrate(lambda)?;
    let gamma_int = gamma.integrate(nu)?;
    let dual_objective_residual = (alpha_int + gamma_int - ln.value).abs();
    let dual_ok = dual_objective_residual <= tol::GAP_RELATIVE * (1.0 + ln.value);

    let lm = solve_transport(lambda, mu, p)?;
    let mn = solve_transport(mu, nu, p)?;
    let (w_lambda_mu, w_mu_nu, w_lambda_nu) = (lm.wasserstein(), mn.wasserstein(), ln.wasserstein());

    let degenerate = w_lambda_mu <= tol::DEGENERATE_DISTANCE || w_mu_nu <= tol::DEGENERATE_DISTANCE;
    if degenerate && fixed_eta.is_none() {
        let mut report = ChainReport::trivial(p, w_lambda_mu, w_mu_nu, w_lambda_nu, dual_objective_residual);
        report.certified &= dual_ok;
        return Ok(report);
    }

    let eta = match fixed_eta {
        Some(eta) => eta,
        None => choose_eta(p, w_lambda_mu, w_mu_nu)?,
    };
    let weights = EtaWeights::new(p, eta)?;
    let k = weights.right;
    let beta = beta_eta(&gamma, eta)?;
    let lemma = lemma_bound_check(&alpha, &beta, &gamma, eta)?;
    let beta_int = beta.integrate(mu)?;

    let ineq_wlamu_slack = weights.left * lm.value - (alpha_int - beta_int);
    let ineq_wmunu_slack = k * mn.value - (beta_int + gamma_int);
    let rhs_eta = weights.left * lm.value + k * mn.value;
    let rhs_collapsed = (w_lambda_mu + w_mu_nu).powf(p);
    let collapse_residual = if rhs_collapsed > 0.0 { (rhs_eta - rhs_collapsed).abs() / rhs_collapsed } else { 0.0 };
    let triangle_slack = w_lambda_mu + w_mu_nu - w_lambda_nu;

    let x0 = lambda.support()[0];
    let integrability = beta_integrability_bound(&beta, &gamma, mu, nu, eta, x0)?;
    let beta_dp_concave = is_dp_concave(&beta.scaled(k.recip()));

    let chain_ok = dual_ok
        && lemma.holds()
        && ineq_wlamu_slack >= -tol::FEASIBILITY
        && ineq_wmunu_slack >= -tol::FEASIBILITY;
    let certified = match fixed_eta {
        Some(_) => chain_ok && rhs_eta - ln.value >= -tol::FEASIBILITY * (1.0 + ln.value),
        None => chain_ok && collapse_residual <= tol::FEASIBILITY && triangle_slack >= -tol::TRIANGLE,
    };

    Ok(ChainReport {
        p,
        branch: Branch::Duality,
        eta: Some(eta),
        coefficient: Some(k),
        w_lambda_mu,
        w_mu_nu,
        w_lambda_nu,
        dual_objective_residual,
        lemma_bound_max_violation: lemma.max_scaled_violation,
        worst_pair: Some(lemma.worst_pair),
        ineq_wlamu_slack,
        ineq_wmunu_slack,
        rhs_eta,
        rhs_collapsed,
        collapse_residual,
        triangle_slack,
        integrability: Some(integrability),
        beta_dp_concave: Some(beta_dp_concave),
        certified,
    })
}

/// The `p = 1` certificate: one 1-Lipschitz `phi` optimal for `(lambda, nu)`
/// bounds both legs through the Kantorovich-Rubinstein formula.
pub fn certify_triangle_kr(lambda: &DiscreteMeasure, mu: &DiscreteMeasure, nu: &DiscreteMeasure) -> Result<ChainReport> {
    check_exponent(1.0, 1.0, false)?;
    require_shared_space(&[lambda, mu, nu])?;
    let ln = solve_transport(lambda, nu, 1.0)?;
    let phi = kr_potential(&ln.duals)?.to_finite()?;
    let lm = solve_transport(lambda, mu, 1.0)?;
    let mn = solve_transport(mu, nu, 1.0)?;
    let (w_lambda_mu, w_mu_nu, w_lambda_nu) = (lm.value, mn.value, ln.value);

    let space = lambda.space();
    let mut lipschitz_excess = f64::NEG_INFINITY;
    let mut worst_pair = (0, 0);
    for x in 0..phi.len() {
        for y in 0..phi.len() {
            let excess = (phi[x] - phi[y]).abs() - space.d(x, y);
            if excess > lipschitz_excess {
                lipschitz_excess = excess;
                worst_pair = (x, y);
            }
        }
    }

    let (at_lambda, at_mu, at_nu) = (lambda.integrate(&phi), mu.integrate(&phi), nu.integrate(&phi));
    let dual_objective_residual = (at_lambda - at_nu - w_lambda_nu).abs();
    let ineq_wlamu_slack = w_lambda_mu - (at_lambda - at_mu).abs();
    let ineq_wmunu_slack = w_mu_nu - (at_mu - at_nu).abs();
    let rhs = w_lambda_mu + w_mu_nu;
    let triangle_slack = rhs - w_lambda_nu;

    let certified = dual_objective_residual <= tol::TRIANGLE
        && lipschitz_excess <= tol::FEASIBILITY
        && ineq_wlamu_slack >= -tol::TRIANGLE
        && ineq_wmunu_slack >= -tol::TRIANGLE
        && triangle_slack >= -tol::TRIANGLE;

    Ok(ChainReport {
        p: 1.0,
        branch: Branch::KantorovichRubinstein,
        eta: None,
        coefficient: None,
        w_lambda_mu,
        w_mu_nu,
        w_lambda_nu,
        dual_objective_residual,
        lemma_bound_max_violation: lipschitz_excess,
        worst_pair: Some(worst_pair),
        ineq_wlamu_slack,
        ineq_wmunu_slack,
        rhs_eta: rhs,
        rhs_collapsed: rhs,
        collapse_residual: 0.0,
        triangle_slack,
        integrability: None,
        beta_dp_concave: None,
        certified,
    })
}
