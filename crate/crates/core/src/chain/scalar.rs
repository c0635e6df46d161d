//! The scalar inequality behind the duality proof of the triangle inequality.
//!
//! For `p > 1` and `eta > 0` the sharpest constant in
//!
//! ```text
//! (X + Y)^p <= (1 + eta) X^p + (1 + f(eta)) Y^p      for all X, Y >= 0
//! ```
//!
//! is `f(eta) = sup_{Z > 0} ( (1 + Z^(1/p))^p - 1 - (1 + eta) Z )`. Writing
//! `r = (eta + 1)^(1/(p-1)) - 1`, the supremum is attained at `Z = r^(-p)`
//! and equals
//!
//! ```text
//! f(eta) = ((eta+1)^(p/(p-1)) - (eta+1)) / r^p - 1 = (1 + 1/r)^(p-1) - 1.
//! ```
//!
//! Every quantity is evaluated through `log1p`/`expm1` so that small `eta`,
//! large `eta` and `p` close to one keep full relative precision.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::tol;

pub(crate) fn check_p_eta(p: f64, eta: f64) -> Result<()> {
    if !(p.is_finite() && p > 1.0) {
        return Err(Error::InvalidExponent {
            p,
            reason: "the scalar inequality needs p > 1; p = 1 goes through the Kantorovich-Rubinstein path",
        });
    }
    if !(eta.is_finite() && eta > 0.0) {
        return Err(Error::Domain(format!("eta must be a positive real, got {eta}")));
    }
    Ok(())
}

/// `(eta + 1)^(1/(p-1)) - 1`, positive for `eta > 0`. Exact at `p = 2`.
fn root_minus_one(p: f64, eta: f64) -> f64 {
    if p == 2.0 {
        return eta;
    }
    (eta.ln_1p() / (p - 1.0)).exp_m1()
}

/// Optimal constant `f(eta)` of the scalar inequality.
pub fn f_eta(p: f64, eta: f64) -> Result<f64> {
    check_p_eta(p, eta)?;
    if p == 2.0 {
        return Ok(eta.recip());
    }
    let r = root_minus_one(p, eta);
    Ok(((p - 1.0) * r.recip().ln_1p()).exp_m1())
}

/// The maximizer `Z = r^(-p)` of the objective defining `f(eta)`.
pub fn critical_z(p: f64, eta: f64) -> Result<f64> {
    check_p_eta(p, eta)?;
    Ok(root_minus_one(p, eta).powf(-p))
}

/// `(1 + Z^(1/p))^p - 1 - (1 + eta) Z`, the function whose supremum is `f(eta)`.
pub fn lemma2_objective(p: f64, eta: f64, z: f64) -> f64 {
    (p * z.powf(1.0 / p).ln_1p()).exp_m1() - (1.0 + eta) * z
}

/// Derivative of [`lemma2_objective`] in `Z`: `(Z^(-1/p) + 1)^(p-1) - (eta + 1)`.
pub fn lemma2_derivative(p: f64, eta: f64, z: f64) -> f64 {
    ((p - 1.0) * z.powf(-1.0 / p).ln_1p()).exp_m1() - eta
}

/// Grid for [`f_eta_brute`]: `points` geometric samples spanning
/// `[Z*/10^decades, Z* 10^decades]` around the critical point `Z*`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BruteGrid {
    pub points: usize,
    pub decades: f64,
    pub include_critical: bool,
}

impl Default for BruteGrid {
    fn default() -> Self {
        Self { points: 2001, decades: 3.0, include_critical: true }
    }
}

/// Maximum of the defining objective over a finite grid of `Z`.
pub fn f_eta_brute(p: f64, eta: f64, grid: &BruteGrid) -> Result<f64> {
    check_p_eta(p, eta)?;
    let center = critical_z(p, eta)?;
    let n = grid.points.max(2);
    let span = grid.decades * std::f64::consts::LN_10;
    let mut best = f64::NEG_INFINITY;
    for k in 0..n {
        let t = -span + 2.0 * span * k as f64 / (n - 1) as f64;
        best = best.max(lemma2_objective(p, eta, center * t.exp()));
    }
    if grid.include_critical {
        best = best.max(lemma2_objective(p, eta, center));
    }
    Ok(best)
}

/// The coefficient pair `(1 + eta, 1 + f(eta))` of the scalar inequality.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EtaWeights {
    pub p: f64,
    pub eta: f64,
    /// `1 + eta`, multiplies `X^p`.
    pub left: f64,
    /// `1 + f(eta)`, multiplies `Y^p`.
    pub right: f64,
}

impl EtaWeights {
    pub fn new(p: f64, eta: f64) -> Result<Self> {
        let f = f_eta(p, eta)?;
        Ok(Self { p, eta, left: 1.0 + eta, right: 1.0 + f })
    }

    /// `(1 + eta) X^p + (1 + f(eta)) Y^p - (X + Y)^p`.
    pub fn slack(&self, x: f64, y: f64) -> f64 {
        self.left * x.powf(self.p) + self.right * y.powf(self.p) - (x + y).powf(self.p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Lemma2Report {
    /// `max (X+Y)^p - (1+eta) X^p - (1+f(eta)) Y^p` over the samples.
    pub max_violation: f64,
    /// Same, each term divided by `1 + (X+Y)^p`.
    pub max_relative_violation: f64,
    /// The sample attaining `max_relative_violation`.
    pub worst: Option<(f64, f64)>,
}

impl Lemma2Report {
    pub fn holds(&self) -> bool {
        self.max_relative_violation <= tol::FEASIBILITY
    }
}

/// Evaluates the scalar inequality on every sample.
pub fn lemma2_check(p: f64, eta: f64, samples: &[(f64, f64)]) -> Result<Lemma2Report> {
    let weights = EtaWeights::new(p, eta)?;
    let mut report = Lemma2Report {
        max_violation: f64::NEG_INFINITY,
        max_relative_violation: f64::NEG_INFINITY,
        worst: None,
    };
    for &(x, y) in samples {
        if !(x >= 0.0 && y >= 0.0 && x.is_finite() && y.is_finite()) {
            return Err(Error::Domain(format!("samples must be finite and nonnegative, got ({x}, {y})")));
        }
        let v = -weights.slack(x, y);
        let rel = v / (1.0 + (x + y).powf(p));
        report.max_violation = report.max_violation.max(v);
        if rel > report.max_relative_violation {
            report.max_relative_violation = rel;
            report.worst = Some((x, y));
        }
    }
    Ok(report)
}

/// `eta = (W(mu,nu)/W(lambda,mu) + 1)^(p-1) - 1`, the choice that collapses
/// the weighted bound onto `(W(lambda,mu) + W(mu,nu))^p`.
///
/// Zero distances have no admissible `eta`; they yield [`Error::Degenerate`]
/// and the triangle inequality is then immediate.
pub fn choose_eta(p: f64, w_lambda_mu: f64, w_mu_nu: f64) -> Result<f64> {
    if !(p.is_finite() && p > 1.0) {
        return Err(Error::InvalidExponent { p, reason: "eta is only chosen for p > 1" });
    }
    if !(w_lambda_mu > 0.0 && w_mu_nu > 0.0) || !w_lambda_mu.is_finite() || !w_mu_nu.is_finite() {
        return Err(Error::Degenerate(format!(
            "distances {w_lambda_mu} and {w_mu_nu} must both be positive"
        )));
    }
    let ratio = w_mu_nu / w_lambda_mu;
    if p == 2.0 {
        return Ok(ratio);
    }
    Ok(((p - 1.0) * ratio.ln_1p()).exp_m1())
}

/// Relative residual of `(1+eta) Z + f(eta) + 1 = (1 + Z^(1/p))^p` with
/// `eta + 1 = (Z^(-1/p) + 1)^(p-1)`.
pub fn collapse_identity_check(p: f64, z: f64) -> Result<f64> {
    if !(z.is_finite() && z > 0.0) {
        return Err(Error::Domain(format!("Z must be a positive real, got {z}")));
    }
    check_p_eta(p, 1.0)?;
    let eta = ((p - 1.0) * z.powf(-1.0 / p).ln_1p()).exp_m1();
    let lhs = (1.0 + eta) * z + f_eta(p, eta)? + 1.0;
    let rhs = (p * z.powf(1.0 / p).ln_1p()).exp();
    Ok((lhs - rhs).abs() / rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent evaluation of the closed form exactly as written, without
    /// the log1p/expm1 rewriting. Fine for moderate arguments.
    fn f_eta_naive(p: f64, eta: f64) -> f64 {
        let s = (eta + 1.0).powf(1.0 / (p - 1.0));
        ((eta + 1.0).powf(p / (p - 1.0)) - (eta + 1.0)) / (s - 1.0).powf(p) - 1.0
    }

    #[test]
    fn closed_form_examples() {
        assert!((f_eta(2.0, 0.5).unwrap() - 2.0).abs() < 1e-14);
        assert!((f_eta(2.0, 1.0).unwrap() - 1.0).abs() < 1e-14);
        assert!((f_eta(3.0, 3.0).unwrap() - 3.0).abs() < 1e-14);
        for &(p, eta) in &[(1.5, 0.3), (2.5, 2.0), (4.0, 0.7), (6.0, 10.0)] {
            let (a, b) = (f_eta(p, eta).unwrap(), f_eta_naive(p, eta));
            assert!((a - b).abs() <= 1e-12 * b, "p={p} eta={eta}: {a} vs {b}");
        }
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(f_eta(1.0, 1.0), Err(Error::InvalidExponent { .. })));
        assert!(matches!(f_eta(2.0, 0.0), Err(Error::Domain(_))));
        assert!(matches!(critical_z(0.5, 1.0), Err(Error::InvalidExponent { .. })));
        assert!(matches!(lemma2_check(2.0, 1.0, &[(-1.0, 1.0)]), Err(Error::Domain(_))));
        assert!(matches!(choose_eta(2.0, 0.0, 1.0), Err(Error::Degenerate(_))));
        assert!(matches!(collapse_identity_check(2.0, 0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn critical_point_examples() {
        assert!((critical_z(2.0, 1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((critical_z(2.0, 3.0).unwrap() - 1.0 / 9.0).abs() < 1e-15);
        for &(p, eta) in &[(1.5, 0.7), (3.0, 3.0), (6.0, 1e-3)] {
            let z = critical_z(p, eta).unwrap();
            assert!(lemma2_derivative(p, eta, z).abs() <= 1e-9);
        }
    }

    #[test]
    fn brute_force_examples() {
        let grid = BruteGrid::default();
        assert!((f_eta_brute(2.0, 1.0, &grid).unwrap() - 1.0).abs() < 1e-14);
        assert!((f_eta_brute(3.0, 3.0, &grid).unwrap() - 3.0).abs() < 1e-14);
        // At Z = 1, p = 2, eta = 1: -1 - 1 - 1 + 4.
        assert_eq!(lemma2_objective(2.0, 1.0, 1.0), 1.0);
    }

    #[test]
    fn lemma2_examples() {
        let r = lemma2_check(2.0, 1.0, &[(1.0, 1.0)]).unwrap();
        assert!(r.max_violation.abs() < 1e-15);
        let r = lemma2_check(2.5, 0.4, &[(0.0, 1.0), (0.0, 3.0)]).unwrap();
        assert!(r.max_violation < 0.0);
    }

    #[test]
    fn eta_choice_examples() {
        assert_eq!(choose_eta(2.0, 2.0, 1.0).unwrap(), 0.5);
        assert!((choose_eta(3.0, 1.0, 1.0).unwrap() - 3.0).abs() < 1e-15);
    }

    #[test]
    fn collapse_examples() {
        assert!(collapse_identity_check(2.0, 1.0).unwrap() < 1e-15);
        assert!(collapse_identity_check(3.0, 1.0).unwrap() < 1e-15);
    }

    #[test]
    fn weights_reduce_at_p2() {
        for &eta in &[1e-4, 0.5, 3.0, 1e4] {
            let w = EtaWeights::new(2.0, eta).unwrap();
            assert!((w.right - (1.0 + 1.0 / eta)).abs() <= 1e-12 * (1.0 + 1.0 / eta));
            assert!(w.left > 1.0 && w.right > 1.0);
        }
    }
}
