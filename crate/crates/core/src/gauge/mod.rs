//! BV actions of gauge models acting linearly on field space, the classical
//! and quantum master equations, and the observable differential.
//!
//! `S = S₀ + Σ_{α<β} C^γ_{αβ} c^α c^β c*_γ + Σ ρ^i_{αj} x^j c^α x*_i`.
//! The ghost term is summed over ordered pairs, which is the normalization
//! for which `{S,S} = 0` is equivalent to invariance of `S₀`, the matrix
//! relation `[ρ_α, ρ_β] = C^γ_{αβ} ρ_γ` and the Jacobi identity.

pub mod catalog;
mod master;
mod model;
mod observable;

pub use master::{
    action_parts, build_bv_action, check_cme, check_model, check_qme, check_theorem_hypotheses,
    diagnose_bracket, vector_field_action, ActionParts, Diagnosis, Hypothesis, HypothesisCheck,
    HypothesisReport, MasterEquationReport,
};
pub use model::{zero_matrix, GaugeModel, Matrix};
pub use observable::{
    check_observable, exp_check, quantum_differential, volume_twist_residual, ExpCheckReport,
    ObservableReport,
};
