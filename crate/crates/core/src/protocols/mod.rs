//! Closed-form singlet conversion probabilities (SCPs).
//!
//! All formulas assume edges of the `γ = 0` family `ρ(α, λ)` unless a function
//! takes full [`PmsParams`](crate::PmsParams). Results are probabilities in
//! `[0, 1]`; tiny negative values from cancellation are clamped to zero.

mod binom;
mod pairwise;
mod purity;
mod recycling;
mod square;
mod subspace;
mod swapping;

pub use binom::{binomial_f64, binomial_u128, ln_binomial};
pub use pairwise::{pcm_branches, pcm_measure, scp_pair, PairScpInput, PCM_SUCCESS};
pub use purity::{minimum_lambda, purity_requirement, PurityRequirement};
pub use recycling::{
    recycle_step, recycling_failure, scp_recycling, RecycleState, StepProbs,
};
pub use square::{majorization_pair_scp, scp_cep_square, scp_square, square_params, SquareParams};
pub use subspace::{scp_distillable_subspace, MAX_SUBSPACE_EDGES};
pub use swapping::{scp_cep_1d, scp_direct_1d, scp_hybrid_1d};

use thiserror::Error;

use crate::qstate::QStateError;

/// Cancellation noise below this magnitude is clamped to zero.
pub const NEGATIVE_SLACK: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProtocolError {
    #[error("parameter out of domain: {0}")]
    Domain(String),
    #[error("probability {0} is outside [0, 1]")]
    NotAProbability(f64),
    #[error("no threshold crossing for λ in [0, 1] (target {0})")]
    Unreachable(f64),
    #[error(transparent)]
    State(#[from] QStateError),
}

pub(crate) fn unit(name: &str, v: f64) -> Result<f64, ProtocolError> {
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(ProtocolError::Domain(format!("{name} = {v} not in [0, 1]")))
    }
}

pub(crate) fn probability(x: f64) -> Result<f64, ProtocolError> {
    if !x.is_finite() || x < -NEGATIVE_SLACK || x > 1.0 + NEGATIVE_SLACK {
        return Err(ProtocolError::NotAProbability(x));
    }
    Ok(x.clamp(0.0, 1.0))
}
