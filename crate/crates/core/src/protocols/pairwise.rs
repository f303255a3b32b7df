use serde::{Deserialize, Serialize};

use super::{probability, ProtocolError};
use crate::qstate::{
    apply_unitary, gates, measure_computational, pms_density, tensor, BranchTree, DensityMatrix,
    PmsParams,
};

/// Outcome of the PCM measurement that leaves a pure entangled pair.
pub const PCM_SUCCESS: &str = "11";

/// Two edges `ρ(α, γ, λ)` and `ρ(β, δ, ν)` joining the same pair of nodes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairScpInput {
    pub first: PmsParams,
    pub second: PmsParams,
}

impl PairScpInput {
    pub fn new(first: PmsParams, second: PmsParams) -> Result<Self, ProtocolError> {
        first.validate()?;
        second.validate()?;
        Ok(Self { first, second })
    }

    pub fn identical(p: PmsParams) -> Result<Self, ProtocolError> {
        Self::new(p, p)
    }
}

/// `2λν·min[α(1−β−δ), β(1−α−γ)]`.
pub fn scp_pair(input: &PairScpInput) -> Result<f64, ProtocolError> {
    let (a, b) = (input.first, input.second);
    a.validate()?;
    b.validate()?;
    let m = (a.alpha * b.beta_weight()).min(b.alpha * a.beta_weight());
    probability(2.0 * a.lam * b.lam * m)
}

/// Pure-state conversion measurement on the exact two-edge state.
///
/// Register layout is `[A1, B1, A2, B2]` where edge one joins `A1–B1` and edge
/// two joins `A2–B2`. Each node applies C-NOT from its first-edge qubit onto its
/// second-edge qubit, then the second-edge qubits are measured. Labels are the
/// outcomes of `A2` and `B2`; branch states live on `[A1, B1]`.
pub fn pcm_branches(input: &PairScpInput) -> Result<BranchTree, ProtocolError> {
    pcm_measure(&pms_density(input.first)?, &pms_density(input.second)?)
}

/// [`pcm_branches`] on arbitrary two-qubit edge states.
pub fn pcm_measure(first: &DensityMatrix, second: &DensityMatrix) -> Result<BranchTree, ProtocolError> {
    let rho = tensor(first, second)?;
    let cnot = gates::cnot();
    let rho = apply_unitary(&rho, &cnot, &[0, 2])?;
    let rho = apply_unitary(&rho, &cnot, &[1, 3])?;
    Ok(measure_computational(&rho, &[2, 3])?)
}
