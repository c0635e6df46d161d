use itertools::Itertools;

use super::common_space;
use crate::error::{check_exponent, Error, Result};
use crate::measure::DiscreteMeasure;

const MAX_POINTS: usize = 8;

/// Brute-force `W_p` for uniform measures on supports of equal size.
///
/// The vertices of the transportation polytope with uniform marginals are
/// permutation matrices, so the minimum over all `n!` matchings is exact.
pub fn permutation_oracle(mu: &DiscreteMeasure, nu: &DiscreteMeasure, p: f64) -> Result<f64> {
    check_exponent(p, 1.0, false)?;
    let (mu, nu) = common_space(mu, nu)?;
    let left = uniform_support(&mu)?;
    let right = uniform_support(&nu)?;
    if left.len() != right.len() {
        return Err(Error::UnsupportedInstance(format!(
            "supports of size {} and {} differ",
            left.len(),
            right.len()
        )));
    }
    let n = left.len();
    if n > MAX_POINTS {
        return Err(Error::UnsupportedInstance(format!("{n} points exceeds the oracle cap of {MAX_POINTS}")));
    }
    let space = mu.space();
    let best = right
        .iter()
        .permutations(n)
        .map(|perm| left.iter().zip(perm).map(|(&i, &j)| space.d(i, j).powf(p)).sum::<f64>())
        .fold(f64::INFINITY, f64::min);
    Ok((best / n as f64).powf(1.0 / p))
}

fn uniform_support(m: &DiscreteMeasure) -> Result<Vec<usize>> {
    let support = m.support();
    let w = 1.0 / support.len() as f64;
    if support.iter().any(|&i| (m.weights()[i] - w).abs() > 1e-12) {
        return Err(Error::UnsupportedInstance("measure is not uniform on its support".into()));
    }
    Ok(support)
}
