use serde::{Deserialize, Serialize};

use super::QStateError;

/// Parameters of the two-qubit mixed state
/// `λ|ψ⟩⟨ψ| + (1−λ)|01⟩⟨01|` with `|ψ⟩ = √α|00⟩ + √(1−α−γ)|11⟩ + √γ|01⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PmsParams {
    pub alpha: f64,
    pub gamma: f64,
    #[serde(rename = "lambda", alias = "lam")]
    pub lam: f64,
}

const SUM_SLACK: f64 = 1e-12;

impl PmsParams {
    pub fn new(alpha: f64, gamma: f64, lam: f64) -> Result<Self, QStateError> {
        let p = Self { alpha, gamma, lam };
        p.validate()?;
        Ok(p)
    }

    /// The `γ = 0` family `ρ(α, λ)`.
    pub fn pure_family(alpha: f64, lam: f64) -> Result<Self, QStateError> {
        Self::new(alpha, 0.0, lam)
    }

    pub fn validate(&self) -> Result<(), QStateError> {
        for (name, v) in [("alpha", self.alpha), ("gamma", self.gamma), ("lambda", self.lam)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(QStateError::ParameterDomain(format!(
                    "{name} = {v} not in [0, 1]"
                )));
            }
        }
        if self.alpha + self.gamma > 1.0 + SUM_SLACK {
            return Err(QStateError::ParameterDomain(format!(
                "alpha + gamma = {} exceeds 1",
                self.alpha + self.gamma
            )));
        }
        Ok(())
    }

    /// Weight of `|11⟩` in `|ψ⟩`.
    pub fn beta_weight(&self) -> f64 {
        (1.0 - self.alpha - self.gamma).max(0.0)
    }

    /// Both `|00⟩` and `|11⟩` amplitudes present and a nonzero entangled fraction.
    pub fn is_entangled(&self) -> bool {
        self.lam > 0.0 && self.alpha > 0.0 && self.alpha + self.gamma < 1.0
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        let overlap = self.gamma; // |⟨ψ|01⟩|²
        let l = self.lam;
        l * l + (1.0 - l) * (1.0 - l) + 2.0 * l * (1.0 - l) * overlap
    }
}

/// Pure state `√a|00⟩ + √(1−a)|11⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PureSchmidt {
    pub a: f64,
}

impl PureSchmidt {
    pub fn new(a: f64) -> Result<Self, QStateError> {
        if !(0.0..=1.0).contains(&a) {
            return Err(QStateError::ParameterDomain(format!("a = {a} not in [0, 1]")));
        }
        Ok(Self { a })
    }

    /// Same state with the larger weight first (`a ≥ ½`); a local relabeling.
    pub fn canonical(self) -> Self {
        Self {
            a: self.a.max(1.0 - self.a),
        }
    }

    pub fn is_maximally_entangled(&self, tol: f64) -> bool {
        (self.a - 0.5).abs() <= tol
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn domain_checks() {
        assert!(PmsParams::new(0.6, 0.1, 0.8).is_ok());
        assert!(PmsParams::new(0.8, 0.3, 0.8).is_err());
        assert!(PmsParams::new(-0.1, 0.0, 0.8).is_err());
        assert!(PmsParams::new(0.5, 0.0, 1.1).is_err());
        assert!(PmsParams::new(0.5, 0.0, f64::NAN).is_err());
    }

    #[test]
    fn entanglement_criterion() {
        assert!(PmsParams::new(0.5, 0.0, 0.3).unwrap().is_entangled());
        assert!(!PmsParams::new(0.5, 0.0, 0.0).unwrap().is_entangled());
        assert!(!PmsParams::new(0.0, 0.2, 1.0).unwrap().is_entangled());
        assert!(!PmsParams::new(0.6, 0.4, 1.0).unwrap().is_entangled());
    }

    #[test]
    fn purity_of_gamma_zero_family() {
        let p = PmsParams::pure_family(0.5, 0.8).unwrap();
        assert!((p.purity() - (0.64 + 0.04)).abs() < 1e-15);
    }
}
