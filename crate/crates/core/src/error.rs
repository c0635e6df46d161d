use thiserror::Error;

use crate::space::Violation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("shape error: {0}")]
    Shape(String),

    #[error("metric axioms violated ({} violation(s), first: {:?})", .0.len(), .0.first())]
    MetricViolations(Vec<Violation>),

    #[error("a metric space needs at least one point")]
    EmptySpace,

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("point index {index} out of range for a space of {len} points")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("invalid exponent p = {p}: {reason}")]
    InvalidExponent { p: f64, reason: &'static str },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("measures live on different spaces and at least one has no coordinates")]
    IncompatibleSpaces,

    #[error("unsupported instance: {0}")]
    UnsupportedInstance(String),

    #[error("couplings cannot be glued: middle marginals differ by {max_deviation:e}")]
    Glueing { max_deviation: f64 },

    #[error("dual pair is infeasible: a(x) + b(y) exceeds the cost by {violation:e}")]
    Infeasible { violation: f64 },

    #[error("potential is identically -inf")]
    IdenticallyNegInfinite,

    #[error("potential does not match the conjugate of gamma (max deviation {max_deviation:e})")]
    PotentialMismatch { max_deviation: f64 },

    #[error("degenerate configuration: {0}")]
    Degenerate(String),

    #[error("network simplex did not terminate within {iterations} pivots")]
    SolverStalled { iterations: usize },
}

pub(crate) fn check_exponent(p: f64, min: f64, strict: bool) -> Result<()> {
    let ok = p.is_finite() && if strict { p > min } else { p >= min };
    if ok {
        Ok(())
    } else if strict {
        Err(Error::InvalidExponent { p, reason: "exponent must exceed 1 here; use the Kantorovich-Rubinstein path for p = 1" })
    } else {
        Err(Error::InvalidExponent { p, reason: "exponent must be a finite real >= 1" })
    }
}
