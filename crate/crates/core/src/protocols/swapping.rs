//! Three-node chains `A–B–C` whose bonds each hold `ρ(α, λ)` and `ρ(β, ν)`.

use super::{probability, unit, ProtocolError};

fn checked(alpha: f64, lam: f64, beta: f64, nu: f64) -> Result<(), ProtocolError> {
    unit("alpha", alpha)?;
    unit("lambda", lam)?;
    unit("beta", beta)?;
    unit("nu", nu)?;
    Ok(())
}

fn cross_min(alpha: f64, beta: f64) -> f64 {
    (alpha * (1.0 - beta)).min(beta * (1.0 - alpha))
}

/// Both bonds distilled independently: `[2λν·min(α(1−β), β(1−α))]²`.
pub fn scp_cep_1d(alpha: f64, lam: f64, beta: f64, nu: f64) -> Result<f64, ProtocolError> {
    checked(alpha, lam, beta, nu)?;
    let p = 2.0 * lam * nu * cross_min(alpha, beta);
    probability(p * p)
}

/// PCM on each bond, swap the two pure states, then Procrustean filtering:
/// `2λ²ν²(α+β−2αβ)·min(α(1−β), β(1−α))`.
pub fn scp_hybrid_1d(alpha: f64, lam: f64, beta: f64, nu: f64) -> Result<f64, ProtocolError> {
    checked(alpha, lam, beta, nu)?;
    let s = alpha + beta - 2.0 * alpha * beta;
    probability(2.0 * lam * lam * nu * nu * s * cross_min(alpha, beta))
}

/// Swap `ρ(α,λ)` with `ρ(β,ν)` across `B` twice, then distill the two
/// resulting `A–C` states: `2λ²ν²αβ(1−α)(1−β)`.
pub fn scp_direct_1d(alpha: f64, lam: f64, beta: f64, nu: f64) -> Result<f64, ProtocolError> {
    checked(alpha, lam, beta, nu)?;
    probability(2.0 * lam * lam * nu * nu * alpha * beta * (1.0 - alpha) * (1.0 - beta))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fig4a_endpoint_values() {
        let (lam, nu) = (0.95, 0.95);
        let cep = scp_cep_1d(0.5, lam, 0.5, nu).unwrap();
        let h = scp_hybrid_1d(0.5, lam, 0.5, nu).unwrap();
        let d = scp_direct_1d(0.5, lam, 0.5, nu).unwrap();
        // (2 · 0.9025 · 0.25)² and 2 · 0.81450625 · 0.0625
        assert!((cep - 0.203_626_562_5).abs() < 1e-12);
        assert!((h - cep).abs() < 1e-15);
        assert!((d - 0.101_813_281_25).abs() < 1e-12);
    }

    #[test]
    fn zero_entangled_fraction() {
        for f in [scp_cep_1d, scp_hybrid_1d, scp_direct_1d] {
            assert_eq!(f(0.7, 0.0, 0.4, 0.9).unwrap(), 0.0);
            assert_eq!(f(0.7, 0.8, 0.4, 0.0).unwrap(), 0.0);
        }
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(scp_hybrid_1d(1.2, 0.5, 0.5, 0.5).is_err());
        assert!(scp_direct_1d(0.5, 0.5, 0.5, -0.1).is_err());
    }

    #[test]
    fn hybrid_decomposes_into_direct_plus_square_of_min() {
        // (α+β−2αβ) = max + min of the two cross terms and max·min = αβ(1−α)(1−β),
        // so p_h = 2λ²ν²(max·min + min²) = p_d + 2λ²ν²·min².
        for i in 1..20 {
            for j in 1..20 {
                let (a, b) = (i as f64 / 20.0, j as f64 / 20.0);
                let (l, n) = (1.0, 1.0);
                let m = cross_min(a, b);
                let lhs = scp_hybrid_1d(a, l, b, n).unwrap();
                let rhs = scp_direct_1d(a, l, b, n).unwrap() + 2.0 * m * m;
                assert!((lhs - rhs).abs() < 1e-15);
            }
        }
    }
}
