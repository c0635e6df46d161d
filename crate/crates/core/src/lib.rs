//! Exact optimal transport on finite metric spaces.
//!
//! The crate computes Wasserstein-p distances between discrete probability
//! measures by solving the transportation linear program with a network
//! simplex, returning the optimal coupling together with dual potentials and
//! a duality-gap certificate. On top of the solver it provides the
//! c-transform (p-Legendre transform) machinery and an executable check of
//! the Wasserstein triangle inequality that goes through Kantorovich duality
//! alone, without glueing couplings. The classical glueing argument is also
//! implemented, as an independent cross-check.
//!
//! Module map:
//!
//! * [`space`] and [`measure`]: metric spaces, measures, couplings, dual pairs.
//! * [`transport`]: the exact solver, a brute-force permutation oracle, glueing.
//! * [`conjugacy`]: p-Legendre transforms, conjugate potentials, the W₁ path.
//! * [`chain`]: the scalar inequality behind the triangle inequality and the
//!   full certificate pipeline.
//!
//! ```
//! use std::sync::Arc;
//! use ndarray::array;
//! use otlab_core::{certify_triangle, euclidean_space, solve_transport, DiscreteMeasure};
//!
//! let space = Arc::new(euclidean_space(array![[0.0], [1.0], [3.0]])?);
//! let dirac = |i| DiscreteMeasure::dirac(space.clone(), i);
//! let (l, m, n) = (dirac(0)?, dirac(1)?, dirac(2)?);
//!
//! let sol = solve_transport(&l, &n, 2.0)?;
//! assert_eq!(sol.wasserstein(), 3.0);
//! assert!(sol.is_certified());
//!
//! let report = certify_triangle(&l, &m, &n, 2.0)?;
//! assert!(report.certified);
//! # Ok::<(), otlab_core::Error>(())
//! ```

pub mod chain;
pub mod conjugacy;
pub mod error;
pub mod instance;
pub mod measure;
pub mod rng;
pub mod space;
pub mod tol;
pub mod transport;

pub use chain::{
    beta_eta, beta_integrability_bound, certify_triangle, certify_triangle_at_eta, certify_triangle_kr, choose_eta,
    collapse_identity_check, critical_z, f_eta, f_eta_brute, lemma2_check, lemma_bound_check,
    lemma2_derivative, lemma2_objective, Branch, BruteGrid, ChainReport, EtaWeights,
    IntegrabilityReport, Lemma2Report, LemmaBoundReport,
};
pub use conjugacy::{
    conjugate_normalize, is_dp_concave, kr_potential, legendre_bridge_check,
    legendre_bridge_residual, p_legendre, Potential,
};
pub use error::{Error, Result};
pub use measure::{p_moment, Coupling, DiscreteMeasure, DualPair};
pub use instance::{random_triple, random_uniform_pair, sweep_triple, SpaceKind, Triple};
pub use space::{
    cost_matrix, euclidean_space, random_euclidean_space, random_metric_space, validate_metric, Axiom,
    FiniteMetricSpace, Violation,
};
pub use transport::{
    duality_gap, glue_couplings, permutation_oracle, solve_transport, triangle_via_glueing,
    wasserstein_p, GlueingCheck, GluedTriple, TransportSolution,
};
