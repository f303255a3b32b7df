use serde::{Deserialize, Serialize};

use super::{unit, ProtocolError};
use crate::qstate::{pms_density, PmsParams};

/// Smallest entangled fraction `λ*` that lets a bond protocol reach a target
/// SCP, and the purity `Tr ρ²` of a single edge `ρ(α, λ*)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PurityRequirement {
    pub alpha: f64,
    pub target: f64,
    pub lambda_star: f64,
    pub purity: f64,
}

/// Bisection for the smallest `λ ∈ [0, 1]` with `scp(λ) ≥ target`.
/// `scp` must be nondecreasing in `λ`.
pub fn minimum_lambda(
    scp: impl Fn(f64) -> Result<f64, ProtocolError>,
    target: f64,
) -> Result<f64, ProtocolError> {
    if scp(1.0)? < target {
        return Err(ProtocolError::Unreachable(target));
    }
    if scp(0.0)? >= target {
        return Ok(0.0);
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if scp(mid)? >= target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Purity is read off the explicit density matrix.
pub fn purity_requirement(
    alpha: f64,
    target: f64,
    scp: impl Fn(f64) -> Result<f64, ProtocolError>,
) -> Result<PurityRequirement, ProtocolError> {
    unit("alpha", alpha)?;
    let lambda_star = minimum_lambda(scp, target)?;
    let rho = pms_density(PmsParams::new(alpha, 0.0, lambda_star)?)?;
    Ok(PurityRequirement {
        alpha,
        target,
        lambda_star,
        purity: rho.purity(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisection_on_a_square() {
        let l = minimum_lambda(|l| Ok(l * l), 0.25).unwrap();
        assert!((l - 0.5).abs() < 1e-14);
        assert!(matches!(
            minimum_lambda(|l| Ok(l * 0.5), 0.75),
            Err(ProtocolError::Unreachable(_))
        ));
        assert_eq!(minimum_lambda(|_| Ok(1.0), 0.5).unwrap(), 0.0);
    }

    #[test]
    fn purity_matches_closed_form() {
        let req = purity_requirement(0.5, 0.25, |l| Ok(l * l / 2.0)).unwrap();
        let l = req.lambda_star;
        assert!((l - 0.5f64.sqrt()).abs() < 1e-12);
        assert!((req.purity - (l * l + (1.0 - l) * (1.0 - l))).abs() < 1e-12);
    }
}
