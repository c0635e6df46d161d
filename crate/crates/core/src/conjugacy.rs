//! p-Legendre transforms (c-transforms for the cost `d^p`) and the
//! potentials built from them.
//!
//! For `f` defined on the points of a finite metric space,
//!
//! ```text
//! f^[p*](y) = min_x ( d(x, y)^p - f(x) )
//! ```
//!
//! where points with `f(x) = -inf` are skipped. The transform reverses the
//! pointwise order, and applying it three times equals applying it once, so a
//! function `g` is itself a transform (d^p-concave) exactly when the double
//! transform returns `g`.

use std::sync::Arc;

use ndarray::Array2;

use crate::error::{check_exponent, Error, Result};
use crate::measure::{DiscreteMeasure, DualPair};
use crate::space::{cost_matrix, FiniteMetricSpace};
use crate::tol;

/// A function on the points of a space with values in `R ∪ {-inf}`.
///
/// `None` encodes `-inf`; it never participates in arithmetic.
#[derive(Debug, Clone, PartialEq)]
pub struct Potential {
    space: Arc<FiniteMetricSpace>,
    p: f64,
    values: Vec<Option<f64>>,
}

impl Potential {
    pub fn new(space: Arc<FiniteMetricSpace>, p: f64, values: Vec<Option<f64>>) -> Result<Self> {
        check_exponent(p, 1.0, false)?;
        if values.len() != space.len() {
            return Err(Error::Shape(format!("{} values on a space of {} points", values.len(), space.len())));
        }
        if values.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::Domain("finite entries of a potential must be real numbers".into()));
        }
        if values.iter().all(Option::is_none) {
            return Err(Error::IdenticallyNegInfinite);
        }
        Ok(Self { space, p, values })
    }

    pub fn finite(space: Arc<FiniteMetricSpace>, p: f64, values: Vec<f64>) -> Result<Self> {
        Self::new(space, p, values.into_iter().map(Some).collect())
    }

    pub fn zero(space: Arc<FiniteMetricSpace>, p: f64) -> Result<Self> {
        let n = space.len();
        Self::finite(space, p, vec![0.0; n])
    }

    pub fn space(&self) -> &Arc<FiniteMetricSpace> {
        &self.space
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn values(&self) -> &[Option<f64>] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// All values, if none is `-inf`.
    pub fn finite_values(&self) -> Option<Vec<f64>> {
        self.values.iter().copied().collect()
    }

    /// Like [`finite_values`](Self::finite_values) but as an error.
    pub fn to_finite(&self) -> Result<Vec<f64>> {
        self.finite_values()
            .ok_or_else(|| Error::Domain("potential takes the value -inf".into()))
    }

    /// `sum_i w[i] * f(i)`; `-inf` on the support of `m` is an error.
    pub fn integrate(&self, m: &DiscreteMeasure) -> Result<f64> {
        let mut total = 0.0;
        for (w, v) in m.weights().iter().zip(&self.values) {
            if *w > 0.0 {
                total += w * v.ok_or_else(|| Error::Domain("potential is -inf on the support".into()))?;
            }
        }
        Ok(total)
    }

    /// Multiplies finite values by `factor > 0`.
    pub fn scaled(&self, factor: f64) -> Self {
        debug_assert!(factor > 0.0);
        Self { values: self.values.iter().map(|v| v.map(|x| x * factor)).collect(), ..self.clone() }
    }

    /// Largest componentwise gap to `other`; infinite when the `-inf` sets differ.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| match (a, b) {
                (Some(a), Some(b)) => (a - b).abs(),
                (None, None) => 0.0,
                _ => f64::INFINITY,
            })
            .fold(0.0, f64::max)
    }

    pub(crate) fn cost(&self) -> Array2<f64> {
        cost_matrix(&self.space, self.p).expect("exponent validated at construction")
    }
}

/// `out[y] = min_x cost[x][y] - f[x]` over finite `f[x]`; smallest index wins ties.
pub(crate) fn transform_with(cost: &Array2<f64>, f: &[Option<f64>]) -> Vec<f64> {
    let n = f.len();
    (0..n)
        .map(|y| {
            f.iter()
                .enumerate()
                .filter_map(|(x, v)| v.map(|v| cost[[x, y]] - v))
                .fold(f64::INFINITY, f64::min)
        })
        .collect()
}

/// `f^[p*](y) = min_x (d(x, y)^p - f(x))`.
pub fn p_legendre(f: &Potential) -> Result<Potential> {
    if f.values.iter().all(Option::is_none) {
        return Err(Error::IdenticallyNegInfinite);
    }
    let values = transform_with(&f.cost(), &f.values);
    Potential::finite(f.space.clone(), f.p, values)
}

/// Double convexification: `b' = a^[p*]`, then `a' = b'^[p*]`.
///
/// The result is a feasible conjugate pair whose dual objective is at least
/// that of the input for every pair of measures.
pub fn conjugate_normalize(duals: &DualPair) -> Result<DualPair> {
    let violation = duals.max_violation();
    if violation > tol::FEASIBILITY {
        return Err(Error::Infeasible { violation });
    }
    let cost = duals.cost();
    let a: Vec<Option<f64>> = duals.a().iter().copied().map(Some).collect();
    let b_new = transform_with(&cost, &a);
    let b_opt: Vec<Option<f64>> = b_new.iter().copied().map(Some).collect();
    let a_new = transform_with(&cost, &b_opt);
    DualPair::new(duals.space().clone(), duals.p(), a_new, b_new)
}

/// True when the double transform of `g` returns `g` within [`tol::CONJUGATE`].
pub fn is_dp_concave(g: &Potential) -> bool {
    let Ok(once) = p_legendre(g) else { return false };
    let Ok(twice) = p_legendre(&once) else { return false };
    twice.max_abs_diff(g) <= tol::CONJUGATE
}

/// 1-Lipschitz potential `phi = -(a^[1*])` from feasible duals for the cost `d`.
///
/// `(-phi, phi)` is the conjugate pair obtained by double convexification, so
/// `<phi, mu> - <phi, nu>` is at least the dual objective of the input.
pub fn kr_potential(duals: &DualPair) -> Result<Potential> {
    if duals.p() != 1.0 {
        return Err(Error::InvalidExponent { p: duals.p(), reason: "the Kantorovich-Rubinstein potential needs p = 1" });
    }
    let violation = duals.max_violation();
    if violation > tol::FEASIBILITY {
        return Err(Error::Infeasible { violation });
    }
    let a: Vec<Option<f64>> = duals.a().iter().copied().map(Some).collect();
    let phi = transform_with(&duals.cost(), &a).into_iter().map(|v| -v).collect();
    Potential::finite(duals.space().clone(), 1.0, phi)
}

/// Largest `|G(y) - (|y|^2 - g(y)) / 2|` where `g = f^[2*]` and `G` is the
/// classical Legendre transform of `F(x) = (|x|^2 - f(x)) / 2`, both taken
/// over the point set.
pub fn legendre_bridge_residual(f: &Potential) -> Result<f64> {
    let coords = f
        .space
        .coords()
        .ok_or_else(|| Error::UnsupportedInstance("Legendre bridge needs a Euclidean space".into()))?;
    if f.p != 2.0 {
        return Err(Error::UnsupportedInstance("Legendre bridge is stated for p = 2".into()));
    }
    let g = p_legendre(f)?.to_finite()?;
    let n = f.len();
    let sq = |i: usize| coords.row(i).iter().map(|x| x * x).sum::<f64>();
    let dot = |i: usize, j: usize| coords.row(i).iter().zip(coords.row(j)).map(|(a, b)| a * b).sum::<f64>();
    // F = +inf where f = -inf; those points drop out of the max.
    let big_f: Vec<Option<f64>> = (0..n).map(|x| f.values[x].map(|fx| 0.5 * (sq(x) - fx))).collect();
    let mut worst = 0.0_f64;
    for y in 0..n {
        let big_g = (0..n)
            .filter_map(|x| big_f[x].map(|fx| dot(x, y) - fx))
            .fold(f64::NEG_INFINITY, f64::max);
        worst = worst.max((big_g - 0.5 * (sq(y) - g[y])).abs());
    }
    Ok(worst)
}

pub fn legendre_bridge_check(f: &Potential) -> Result<bool> {
    Ok(legendre_bridge_residual(f)? <= tol::CONJUGATE)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{euclidean_space, random_metric_space};
    use crate::transport::solve_transport;

    fn two_points() -> Arc<FiniteMetricSpace> {
        Arc::new(euclidean_space(Array2::from_shape_vec((2, 1), vec![0.0, 1.0]).unwrap()).unwrap())
    }

    #[test]
    fn transform_examples() {
        let s = Arc::new(random_metric_space(5, 2).unwrap());
        let zero = Potential::zero(s.clone(), 2.5).unwrap();
        assert_eq!(p_legendre(&zero).unwrap(), zero);

        let f = Potential::finite(two_points(), 2.0, vec![1.0, 0.0]).unwrap();
        assert_eq!(p_legendre(&f).unwrap().to_finite().unwrap(), vec![-1.0, 0.0]);

        let f = Potential::finite(s.clone(), 1.5, vec![0.3, -0.2, 0.9, 0.0, 0.1]).unwrap();
        let shifted = Potential::finite(s, 1.5, vec![1.3, 0.8, 1.9, 1.0, 1.1]).unwrap();
        let (t, ts) = (p_legendre(&f).unwrap(), p_legendre(&shifted).unwrap());
        for (a, b) in t.to_finite().unwrap().iter().zip(ts.to_finite().unwrap()) {
            assert!((a - 1.0 - b).abs() < 1e-12);
        }
    }

    #[test]
    fn neg_infinite_entries_are_skipped() {
        let s = two_points();
        let f = Potential::new(s.clone(), 2.0, vec![None, Some(0.5)]).unwrap();
        assert_eq!(p_legendre(&f).unwrap().to_finite().unwrap(), vec![0.5, -0.5]);
        assert_eq!(Potential::new(s, 2.0, vec![None, None]), Err(Error::IdenticallyNegInfinite));
    }

    #[test]
    fn dp_concavity_examples() {
        let s = two_points();
        assert!(is_dp_concave(&Potential::zero(s.clone(), 2.0).unwrap()));
        let g = Potential::finite(s.clone(), 2.0, vec![0.0, 10.0]).unwrap();
        assert!(!is_dp_concave(&g));
        let twice = p_legendre(&p_legendre(&g).unwrap()).unwrap();
        assert_eq!(twice.to_finite().unwrap(), vec![9.0, 10.0]);
        assert!(!is_dp_concave(&Potential::new(s, 2.0, vec![None, Some(0.0)]).unwrap()));
    }

    #[test]
    fn normalize_examples() {
        let s = Arc::new(random_metric_space(4, 6).unwrap());
        let zero = DualPair::new(s.clone(), 2.0, vec![0.0; 4], vec![0.0; 4]).unwrap();
        assert_eq!(conjugate_normalize(&zero).unwrap(), zero);

        let bad = DualPair::new_unchecked(s, 2.0, vec![1.0; 4], vec![0.0; 4]).unwrap();
        assert!(matches!(conjugate_normalize(&bad), Err(Error::Infeasible { .. })));
    }

    #[test]
    fn normalize_lp_duals_on_the_line() {
        let s = Arc::new(euclidean_space(Array2::from_shape_vec((4, 1), vec![0.0, 1.0, 2.0, 3.0]).unwrap()).unwrap());
        let mu = DiscreteMeasure::uniform_on(s.clone(), &[0, 1]).unwrap();
        let nu = DiscreteMeasure::uniform_on(s, &[2, 3]).unwrap();
        let sol = solve_transport(&mu, &nu, 2.0).unwrap();
        let conj = conjugate_normalize(&sol.duals).unwrap();
        assert!((conj.objective(&mu, &nu) - 4.0).abs() < 1e-12);
        assert!(conjugate_normalize(&conj).unwrap().a().iter().zip(conj.a()).all(|(x, y)| (x - y).abs() < 1e-12));
    }

    #[test]
    fn kr_on_two_diracs() {
        let s = two_points();
        let x = DiscreteMeasure::dirac(s.clone(), 0).unwrap();
        let y = DiscreteMeasure::dirac(s.clone(), 1).unwrap();
        let sol = solve_transport(&x, &y, 1.0).unwrap();
        let phi = kr_potential(&sol.duals).unwrap().to_finite().unwrap();
        assert!((phi[0] - phi[1] - 1.0).abs() < 1e-12);

        let zero = DualPair::new(s.clone(), 1.0, vec![0.0; 2], vec![0.0; 2]).unwrap();
        assert_eq!(kr_potential(&zero).unwrap().to_finite().unwrap(), vec![0.0, 0.0]);
        let p2 = DualPair::new(s, 2.0, vec![0.0; 2], vec![0.0; 2]).unwrap();
        assert!(matches!(kr_potential(&p2), Err(Error::InvalidExponent { .. })));
    }

    #[test]
    fn bridge_examples() {
        let origin = Arc::new(euclidean_space(Array2::zeros((1, 2))).unwrap());
        assert!(legendre_bridge_check(&Potential::zero(origin, 2.0).unwrap()).unwrap());
        assert!(legendre_bridge_residual(&Potential::zero(two_points(), 2.0).unwrap()).unwrap() < 1e-15);

        let metric = Arc::new(random_metric_space(3, 0).unwrap());
        assert!(matches!(
            legendre_bridge_check(&Potential::zero(metric, 2.0).unwrap()),
            Err(Error::UnsupportedInstance(_))
        ));
    }
}
