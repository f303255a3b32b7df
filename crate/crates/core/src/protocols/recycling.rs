//! Pairwise PCM with recycling of the `00` outcome.
//!
//! When PCM on two copies of `ρ(α_k, λ_k)` yields `00`, the surviving pair is
//! again of the `γ = 0` family with parameters `(α_{k+1}, λ_{k+1})` and is fed
//! into the next round. Odd leftovers in a round are discarded.

use serde::{Deserialize, Serialize};

use super::{binomial_f64, probability, unit, ProtocolError};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecycleState {
    pub alpha_k: f64,
    pub lam_k: f64,
    pub k: usize,
}

impl RecycleState {
    pub fn new(alpha: f64, lam: f64) -> Result<Self, ProtocolError> {
        unit("alpha", alpha)?;
        unit("lambda", lam)?;
        Ok(Self {
            alpha_k: alpha,
            lam_k: lam,
            k: 0,
        })
    }
}

/// Outcome probabilities of one PCM on two identical edges.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepProbs {
    /// singlet
    pub p_succ: f64,
    /// a recyclable state survives
    pub c: f64,
    /// the two target qubits disagree
    pub f: f64,
}

pub fn recycle_step(s: RecycleState) -> Result<(RecycleState, StepProbs), ProtocolError> {
    let a = unit("alpha", s.alpha_k)?;
    let l = unit("lambda", s.lam_k)?;
    let overlap = 1.0 - 2.0 * a + 2.0 * a * a;
    let c = 1.0 - 2.0 * l + 2.0 * (1.0 - a + a * a) * l * l;
    let probs = StepProbs {
        p_succ: probability(2.0 * l * l * a * (1.0 - a))?,
        c: probability(c)?,
        f: probability(2.0 * l * (1.0 - l))?,
    };
    // c ≥ ½ min over the domain, so both divisions are safe
    let next = RecycleState {
        alpha_k: (a * a / overlap).clamp(0.0, 1.0),
        lam_k: (l * l * overlap / c).clamp(0.0, 1.0),
        k: s.k + 1,
    };
    Ok((next, probs))
}

/// Failure probability of the recycling protocol on `n` copies of the state `s`.
pub fn recycling_failure(n: usize, s: RecycleState) -> Result<f64, ProtocolError> {
    // levels[i] holds (f_i, c_i) for round i
    let mut levels = Vec::new();
    let mut state = s;
    let mut m = n / 2;
    loop {
        let (next, probs) = recycle_step(state)?;
        levels.push((probs.f, probs.c));
        if m == 0 {
            break;
        }
        m /= 2;
        state = next;
    }
    let mut memo: Vec<Vec<Option<f64>>> = Vec::with_capacity(levels.len());
    let mut width = n;
    for _ in 0..levels.len() {
        memo.push(vec![None; width + 1]);
        width /= 2;
    }
    probability(failure(n, 0, &levels, &mut memo))
}

fn failure(n: usize, level: usize, levels: &[(f64, f64)], memo: &mut [Vec<Option<f64>>]) -> f64 {
    let pairs = n / 2;
    if pairs == 0 {
        return 1.0;
    }
    if let Some(v) = memo[level][n] {
        return v;
    }
    let (f, c) = levels[level];
    let mut total = 0.0;
    for k in 0..=pairs {
        let weight = binomial_f64(pairs as u64, k as u64)
            * f.powi((pairs - k) as i32)
            * c.powi(k as i32);
        if weight == 0.0 {
            continue;
        }
        total += weight * failure(k, level + 1, levels, memo);
    }
    memo[level][n] = Some(total);
    total
}

/// `1 − F_n(0)` for `n` copies of `ρ(α, λ)`.
pub fn scp_recycling(n: usize, alpha: f64, lam: f64) -> Result<f64, ProtocolError> {
    let f = recycling_failure(n, RecycleState::new(alpha, lam)?)?;
    probability(1.0 - f)
}
