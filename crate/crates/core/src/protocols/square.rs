//! Square `A–B–D–C` with two-edge bonds `ρ(α,λ), ρ(β,ν)` on every side,
//! connecting the opposite corners `A` and `D`.

use serde::{Deserialize, Serialize};

use super::{probability, scp_cep_1d, unit, ProtocolError};
use crate::qstate::PureSchmidt;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SquareParams {
    /// Schmidt weight of the pure state left on a bond after PCM.
    pub alpha_hat: f64,
    /// Probability that PCM succeeds on one bond.
    pub p_c: f64,
    /// Schmidt weight after XZ-swapping two `α̂` pairs.
    pub alpha_tilde: f64,
}

/// `None` when `α + β − 2αβ = 0`, i.e. PCM can never leave an entangled pair.
pub fn square_params(
    alpha: f64,
    lam: f64,
    beta: f64,
    nu: f64,
) -> Result<Option<SquareParams>, ProtocolError> {
    unit("alpha", alpha)?;
    unit("lambda", lam)?;
    unit("beta", beta)?;
    unit("nu", nu)?;
    let s = alpha + beta - 2.0 * alpha * beta;
    if s <= 0.0 {
        return Ok(None);
    }
    let alpha_hat = ((alpha * (1.0 - beta)).max(beta * (1.0 - alpha)) / s).clamp(0.5, 1.0);
    let q = alpha_hat * (1.0 - alpha_hat);
    let radicand = (1.0 - 16.0 * q * q).max(0.0);
    Ok(Some(SquareParams {
        alpha_hat,
        p_c: lam * nu * s,
        alpha_tilde: (1.0 + radicand.sqrt()) / 2.0,
    }))
}

/// `min(1, 2(1 − a²))` for the pair `|a⟩ ⊗ |a⟩`, with `a ≥ ½`.
pub fn majorization_pair_scp(a: PureSchmidt) -> f64 {
    let a = a.canonical().a;
    (2.0 * (1.0 - a * a)).min(1.0)
}

/// `4p_c²(1−p_c²)(1−α̂) + p_c⁴·min(1, 2(1−α̃²))`; zero for a degenerate bond.
pub fn scp_square(alpha: f64, lam: f64, beta: f64, nu: f64) -> Result<f64, ProtocolError> {
    let Some(sq) = square_params(alpha, lam, beta, nu)? else {
        return Ok(0.0);
    };
    let pc2 = sq.p_c * sq.p_c;
    let pair = majorization_pair_scp(PureSchmidt { a: sq.alpha_tilde });
    probability(4.0 * pc2 * (1.0 - pc2) * (1.0 - sq.alpha_hat) + pc2 * pc2 * pair)
}

/// Two independent CEP chains between the corners: `1 − (1 − p_CEP)²`.
pub fn scp_cep_square(alpha: f64, lam: f64, beta: f64, nu: f64) -> Result<f64, ProtocolError> {
    let p = scp_cep_1d(alpha, lam, beta, nu)?;
    probability(1.0 - (1.0 - p) * (1.0 - p))
}
