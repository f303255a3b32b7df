use super::{binomial_u128, probability, unit, ProtocolError};

/// Largest edge count for which the binomial products stay exact in `u128`.
pub const MAX_SUBSPACE_EDGES: usize = 64;

/// SCP of the distillable-subspace protocol on `n` identical edges `ρ(α, λ)`.
///
/// `α < ½` is first mapped to `1 − α`, which is a local relabeling.
pub fn scp_distillable_subspace(n: usize, alpha: f64, lam: f64) -> Result<f64, ProtocolError> {
    if n < 2 {
        return Err(ProtocolError::Domain(format!("need at least 2 edges, got {n}")));
    }
    if n > MAX_SUBSPACE_EDGES {
        return Err(ProtocolError::Domain(format!(
            "{n} edges exceeds the supported maximum {MAX_SUBSPACE_EDGES}"
        )));
    }
    let alpha = unit("alpha", alpha)?;
    let lam = unit("lambda", lam)?;
    let alpha = alpha.max(1.0 - alpha);
    let n64 = n as u64;
    let mut total = 0.0;
    for l in 0..=n {
        let m = n - l; // edges that kept their entangled component
        if m < 2 {
            continue;
        }
        let outer = lam.powi(m as i32) * (1.0 - lam).powi(l as i32) * binom(n64, l as u64);
        if outer == 0.0 {
            continue;
        }
        let mut inner = 0.0;
        for k in 1..m {
            let cmk = binomial_u128(m as u64, k as u64).expect("n <= 64");
            let num = cmk * (cmk - 1);
            let den = binomial_u128(n64, k as u64).expect("n <= 64") - 1;
            inner += alpha.powi((m - k) as i32) * (1.0 - alpha).powi(k as i32) * num as f64
                / den as f64;
        }
        total += outer * inner;
    }
    probability(total)
}

fn binom(n: u64, k: u64) -> f64 {
    binomial_u128(n, k).expect("n <= 64") as f64
}
