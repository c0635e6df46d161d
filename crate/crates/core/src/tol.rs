//! Absolute tolerances shared across the crate.
//!
//! Three tiers: construction error of metric data, round-off in the
//! transportation LP, and round-off in conjugation.

/// Metric axioms and measure normalization.
pub const METRIC: f64 = 1e-12;

/// Sum of the weights of a measure.
pub const MASS: f64 = 1e-12;

/// Row and column sums of couplings.
pub const MARGINAL: f64 = 1e-10;

/// Dual feasibility `a(x) + b(y) <= d(x, y)^p`.
pub const FEASIBILITY: f64 = 1e-9;

/// Relative duality gap: `gap <= GAP_RELATIVE * (1 + value)`.
pub const GAP_RELATIVE: f64 = 1e-7;

/// Complementary slackness on cells carrying more than [`SUPPORT`] mass.
pub const SLACKNESS: f64 = 1e-7;

/// Mass threshold above which a coupling cell counts as support.
pub const SUPPORT: f64 = 1e-10;

/// Componentwise agreement of potentials after conjugation.
pub const CONJUGATE: f64 = 1e-9;

/// Slack allowed in the triangle inequality for W_p.
pub const TRIANGLE: f64 = 1e-8;

/// Distances at or below this trigger the degenerate branch of the chain.
pub const DEGENERATE_DISTANCE: f64 = 1e-12;
