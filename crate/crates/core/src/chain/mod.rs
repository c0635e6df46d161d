//! The triangle inequality for `W_p` certified through duality: the scalar
//! inequality, the `beta_eta` construction and the assembled chain.

mod certify;
mod scalar;

pub use certify::{
    beta_eta, beta_integrability_bound, certify_triangle, certify_triangle_at_eta, certify_triangle_kr, lemma_bound_check, Branch,
    ChainReport, IntegrabilityReport, LemmaBoundReport,
};
pub use scalar::{
    choose_eta, collapse_identity_check, critical_z, f_eta, f_eta_brute, lemma2_check, lemma2_derivative,
    lemma2_objective, BruteGrid, EtaWeights, Lemma2Report,
};
