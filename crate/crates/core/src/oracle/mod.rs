//! Branch-enumeration implementations of the distillation and swapping
//! protocols, built only from the exact state algebra in [`crate::qstate`].
//!
//! Nothing here calls the closed forms in [`crate::protocols`]; the
//! verification driver at the bottom compares the two routes. The
//! [`graph`] submodule holds the exhaustive counterpart of the max-flow
//! feasibility check.

pub mod graph;

use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::protocols::{
    pcm_measure, recycle_step, scp_direct_1d, scp_hybrid_1d, scp_pair, PairScpInput,
    ProtocolError, RecycleState, StepProbs, PCM_SUCCESS,
};
use crate::qstate::{
    apply_kraus, apply_unitary, bell_measure_swap, form_one_witness, gates, measure_computational,
    pms_density, reduced_state, tensor, ComplexMatrix, DensityMatrix, PmsParams, PureSchmidt,
    QStateError,
};

const PURITY_TOL: f64 = 1e-9;

/// Explicit two-outcome local filter on qubit 0 of a pure two-qubit state.
///
/// The filter is built in the Schmidt basis of qubit 0 (eigenbasis of its
/// reduced state). Returns the probability of the singlet outcome and the
/// post-filter state.
pub fn procrustean_on_state(
    s: &DensityMatrix,
) -> Result<(f64, Option<DensityMatrix>), ProtocolError> {
    let purity = s.purity();
    if s.num_qubits() != 2 || (purity - 1.0).abs() > PURITY_TOL {
        return Err(QStateError::NotPure(purity).into());
    }
    let eig = reduced_state(s, &[0])?.eigen_decomposition();
    let (a, e1) = (&eig[0].0, &eig[0].1);
    let e2 = &eig[1].1;
    let a = a.clamp(0.5, 1.0);
    let keep = ((1.0 - a) / a).sqrt();
    let proj = |v: &[Complex64], w: f64| -> Vec<Vec<Complex64>> {
        (0..2)
            .map(|i| (0..2).map(|j| v[i] * v[j].conj() * w).collect())
            .collect()
    };
    let add = |x: Vec<Vec<Complex64>>, y: Vec<Vec<Complex64>>| -> Vec<Vec<Complex64>> {
        x.iter()
            .zip(&y)
            .map(|(r, q)| r.iter().zip(q).map(|(u, v)| u + v).collect())
            .collect()
    };
    let k0 = ComplexMatrix::from_rows(&add(proj(e1, keep), proj(e2, 1.0)))?;
    let k1 = ComplexMatrix::from_rows(&proj(e1, (1.0 - keep * keep).max(0.0).sqrt()))?;
    let tree = apply_kraus(s, &[k0, k1], &[0])?;
    let success = &tree.branches[0];
    Ok((success.probability, success.state.clone()))
}

/// Explicit filtering of `√a|00⟩ + √(1−a)|11⟩`.
pub fn procrustean_explicit(a: PureSchmidt) -> Result<f64, ProtocolError> {
    let amp = [
        Complex64::new(a.a.sqrt(), 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new((1.0 - a.a).max(0.0).sqrt(), 0.0),
    ];
    Ok(procrustean_on_state(&DensityMatrix::from_pure(&amp)?)?.0)
}

/// PCM followed by filtering of the `11` outcome.
pub fn pcm_then_filter(first: &DensityMatrix, second: &DensityMatrix) -> Result<f64, ProtocolError> {
    let tree = pcm_measure(first, second)?;
    let success = tree.branch(PCM_SUCCESS).expect("PCM has four outcomes");
    match &success.state {
        None => Ok(0.0),
        Some(state) => Ok(success.probability * procrustean_on_state(state)?.0),
    }
}

/// Exact SCP of two edges via PCM and explicit filtering.
pub fn pcm_procrustean_scp(input: &PairScpInput) -> Result<f64, ProtocolError> {
    pcm_then_filter(&pms_density(input.first)?, &pms_density(input.second)?)
}

/// One PCM round on two copies of `rho`.
#[derive(Clone, Debug)]
pub struct RecycleBranch {
    pub probs: StepProbs,
    /// Surviving pair after the `00` outcome.
    pub recycled: Option<DensityMatrix>,
}

pub fn pcm_recycle_branch(rho: &DensityMatrix) -> Result<RecycleBranch, ProtocolError> {
    let tree = pcm_measure(rho, rho)?;
    let success = tree.branch(PCM_SUCCESS).expect("PCM has four outcomes");
    let p_succ = match &success.state {
        None => 0.0,
        Some(state) => success.probability * procrustean_on_state(state)?.0,
    };
    let zero = tree.branch("00").expect("PCM has four outcomes");
    Ok(RecycleBranch {
        probs: StepProbs {
            p_succ,
            c: zero.probability,
            f: tree.probability("01") + tree.probability("10"),
        },
        recycled: zero.state.clone(),
    })
}

/// Failure probability of recycling on `n` copies of `ρ(α, λ)`, by walking
/// every outcome of every pair in every round.
pub fn recycling_failure_tree(n: usize, alpha: f64, lam: f64) -> Result<f64, ProtocolError> {
    let rho = pms_density(PmsParams::new(alpha, 0.0, lam)?)?;
    let mut levels: Vec<RecycleBranch> = Vec::new();
    fail_with(n, 0, Some(&rho), &mut levels)
}

fn level_branch<'a>(
    level: usize,
    rho: &DensityMatrix,
    levels: &'a mut Vec<RecycleBranch>,
) -> Result<&'a RecycleBranch, ProtocolError> {
    if levels.len() <= level {
        levels.push(pcm_recycle_branch(rho)?);
    }
    Ok(&levels[level])
}

fn fail_with(
    count: usize,
    level: usize,
    rho: Option<&DensityMatrix>,
    levels: &mut Vec<RecycleBranch>,
) -> Result<f64, ProtocolError> {
    let pairs = count / 2;
    let Some(rho) = rho else {
        // a zero-probability state never gets here with weight
        return Ok(1.0);
    };
    if pairs == 0 {
        return Ok(1.0);
    }
    let branch = level_branch(level, rho, levels)?.clone();
    // enumerate the outcome of each pair: S ends the protocol, C recycles, F drops
    let mut total = 0.0;
    for code in 0..3usize.pow(pairs as u32) {
        let mut weight = 1.0;
        let mut recycled = 0;
        let mut succeeded = false;
        let mut c = code;
        for _ in 0..pairs {
            match c % 3 {
                0 => {
                    weight *= branch.probs.p_succ;
                    succeeded = true;
                }
                1 => {
                    weight *= branch.probs.c;
                    recycled += 1;
                }
                _ => weight *= branch.probs.f,
            }
            c /= 3;
        }
        if succeeded || weight == 0.0 {
            continue;
        }
        total += weight * fail_with(recycled, level + 1, branch.recycled.as_ref(), levels)?;
    }
    Ok(total)
}

/// Direct swapping on `A–B–C` with every outcome enumerated.
///
/// `ρ(α,λ)` on `A–B` is swapped with `ρ(β,ν)` on `B–C`, and `ρ(β,ν)` on
/// `A–B` with `ρ(α,λ)` on `B–C`. Only `Φ±` outcomes are kept; `Ψ±` outcomes
/// leave noise on both `|01⟩` and `|10⟩` and are discarded. Each pair of
/// surviving `A–C` states is distilled by PCM and filtering.
pub fn direct_swap_scp(alpha: f64, lam: f64, beta: f64, nu: f64) -> Result<f64, ProtocolError> {
    let ra = pms_density(PmsParams::new(alpha, 0.0, lam)?)?;
    let rb = pms_density(PmsParams::new(beta, 0.0, nu)?)?;
    let first = bell_measure_swap(&tensor(&ra, &rb)?, [1, 2], 3)?;
    let second = bell_measure_swap(&tensor(&rb, &ra)?, [1, 2], 3)?;
    let keep = |label: &str| label.starts_with("phi");
    let mut total = 0.0;
    for b1 in first.iter().filter(|b| keep(&b.label)) {
        for b2 in second.iter().filter(|b| keep(&b.label)) {
            if let (Some(s1), Some(s2)) = (&b1.state, &b2.state) {
                total += b1.probability * b2.probability * pcm_then_filter(s1, s2)?;
            }
        }
    }
    Ok(total)
}

/// [`direct_swap_scp`] on one 8-qubit register instead of composing 4-qubit pieces.
///
/// Layout: `[A1, B1, B2, C1, A2, B3, B4, C2]` with edges `A1–B1: ρ(α,λ)`,
/// `B2–C1: ρ(β,ν)`, `A2–B3: ρ(β,ν)`, `B4–C2: ρ(α,λ)`.
pub fn direct_swap_scp_full_register(
    alpha: f64,
    lam: f64,
    beta: f64,
    nu: f64,
) -> Result<f64, ProtocolError> {
    let ra = pms_density(PmsParams::new(alpha, 0.0, lam)?)?;
    let rb = pms_density(PmsParams::new(beta, 0.0, nu)?)?;
    let rho = tensor(&tensor(&tensor(&ra, &rb)?, &rb)?, &ra)?;
    // second swap first so the indices of the first pair stay put
    let second = bell_measure_swap(&rho, [5, 6], 7)?;
    let mut total = 0.0;
    for b2 in second.iter().filter(|b| b.label.starts_with("phi")) {
        let Some(s2) = &b2.state else { continue };
        // remaining: [A1, B1, B2, C1, A2, C2]
        let first = bell_measure_swap(s2, [1, 2], 3)?;
        for b1 in first.iter().filter(|b| b.label.starts_with("phi")) {
            let Some(s) = &b1.state else { continue };
            // remaining: [A1, C1, A2, C2]; PCM with A1→A2 and C1→C2
            let cnot = gates::cnot();
            let s = apply_unitary(s, &cnot, &[0, 2])?;
            let s = apply_unitary(&s, &cnot, &[1, 3])?;
            let tree = measure_computational(&s, &[2, 3])?;
            let success = tree.branch(PCM_SUCCESS).expect("four outcomes");
            if let Some(state) = &success.state {
                total += b2.probability
                    * b1.probability
                    * success.probability
                    * procrustean_on_state(state)?.0;
            }
        }
    }
    Ok(total)
}

/// Hybrid swapping: PCM on both bonds, Bell measurement at `B`, then filtering.
pub fn hybrid_swap_scp(alpha: f64, lam: f64, beta: f64, nu: f64) -> Result<f64, ProtocolError> {
    let input = PairScpInput::new(
        PmsParams::new(alpha, 0.0, lam)?,
        PmsParams::new(beta, 0.0, nu)?,
    )?;
    let bond = pcm_measure(&pms_density(input.first)?, &pms_density(input.second)?)?;
    let success = bond.branch(PCM_SUCCESS).expect("four outcomes");
    let Some(pure) = &success.state else {
        return Ok(0.0);
    };
    let swapped = bell_measure_swap(&tensor(pure, pure)?, [1, 2], 3)?;
    let mut total = 0.0;
    for b in swapped.iter() {
        if let Some(s) = &b.state {
            total += b.probability * procrustean_on_state(s)?.0;
        }
    }
    Ok(success.probability * success.probability * total)
}

/// For every Bell outcome of one swap, whether the resulting `A–C` state is
/// locally equivalent to a member of the `ρ(α, γ, λ)` family.
pub fn swap_form_closure(a: PmsParams, b: PmsParams) -> Result<Vec<(String, bool)>, ProtocolError> {
    let tree = bell_measure_swap(&tensor(&pms_density(a)?, &pms_density(b)?)?, [1, 2], 3)?;
    let mut out = Vec::new();
    for br in tree.iter() {
        if let Some(s) = &br.state {
            out.push((br.label.clone(), form_one_witness(s)?.is_some()));
        }
    }
    Ok(out)
}

/// Closed forms under test; swap any of them for a perturbed version to
/// exercise the failure path.
#[derive(Clone, Copy)]
pub struct ClosedForms {
    pub pair: fn(&PairScpInput) -> Result<f64, ProtocolError>,
    pub step: fn(RecycleState) -> Result<(RecycleState, StepProbs), ProtocolError>,
    pub direct: fn(f64, f64, f64, f64) -> Result<f64, ProtocolError>,
    pub hybrid: fn(f64, f64, f64, f64) -> Result<f64, ProtocolError>,
}

impl Default for ClosedForms {
    fn default() -> Self {
        Self {
            pair: scp_pair,
            step: recycle_step,
            direct: scp_direct_1d,
            hybrid: scp_hybrid_1d,
        }
    }
}

/// `α, β` range over `alphas`, `λ, ν` over `lams`, and `γ = δ` over `gammas`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyGrid {
    pub alphas: Vec<f64>,
    pub lams: Vec<f64>,
    pub gammas: Vec<f64>,
}

impl Default for VerifyGrid {
    fn default() -> Self {
        Self {
            alphas: vec![0.5, 0.6, 0.75, 0.9],
            lams: vec![0.5, 0.8, 1.0],
            gammas: vec![0.0, 0.1],
        }
    }
}

impl VerifyGrid {
    pub fn is_empty(&self) -> bool {
        self.alphas.is_empty() || self.lams.is_empty() || self.gammas.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CaseReport {
    pub name: String,
    pub points: usize,
    pub max_deviation: f64,
    pub worst_point: String,
    pub tolerance: f64,
}

impl CaseReport {
    fn new(name: &str, tolerance: f64) -> Self {
        Self {
            name: name.to_string(),
            points: 0,
            max_deviation: 0.0,
            worst_point: String::new(),
            tolerance,
        }
    }

    fn record(&mut self, deviation: f64, point: impl FnOnce() -> String) {
        self.points += 1;
        let deviation = if deviation.is_nan() { f64::INFINITY } else { deviation };
        if deviation > self.max_deviation || self.worst_point.is_empty() {
            self.max_deviation = self.max_deviation.max(deviation);
            self.worst_point = point();
        }
    }

    pub fn passed(&self) -> bool {
        self.points > 0 && self.max_deviation <= self.tolerance
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub cases: Vec<CaseReport>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(CaseReport::passed)
    }

    pub fn failures(&self) -> Vec<&CaseReport> {
        self.cases.iter().filter(|c| !c.passed()).collect()
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.cases {
            writeln!(
                f,
                "{:<6} {:<28} points={:<4} max_dev={:.3e} tol={:.0e} worst=[{}]",
                if c.passed() { "PASS" } else { "FAIL" },
                c.name,
                c.points,
                c.max_deviation,
                c.tolerance,
                c.worst_point
            )?;
        }
        Ok(())
    }
}

pub const ORACLE_TOL: f64 = 1e-10;

fn pair_inputs(grid: &VerifyGrid) -> Vec<(f64, f64, f64, f64, f64)> {
    let mut out = Vec::new();
    for &g in &grid.gammas {
        for &a in &grid.alphas {
            for &b in &grid.alphas {
                for &l in &grid.lams {
                    for &n in &grid.lams {
                        if PmsParams::new(a, g, l).is_ok() && PmsParams::new(b, g, n).is_ok() {
                            out.push((g, a, l, b, n));
                        }
                    }
                }
            }
        }
    }
    out
}

fn check_grid(grid: &VerifyGrid) -> Result<(), ProtocolError> {
    if grid.is_empty() {
        return Err(ProtocolError::Domain("verification grid is empty".into()));
    }
    Ok(())
}

/// PCM against the pair formula, and the `00` and mismatch branches against
/// one recycling step.
pub fn verify_pairwise(grid: &VerifyGrid, forms: &ClosedForms) -> Result<Vec<CaseReport>, ProtocolError> {
    check_grid(grid)?;
    let mut pair = CaseReport::new("pcm_vs_pair_formula", ORACLE_TOL);
    let mut step = CaseReport::new("pcm_00_vs_recycle_step", ORACLE_TOL);
    let mut mixed = CaseReport::new("pcm_mismatch_vs_f", ORACLE_TOL);

    for (g, a, l, b, n) in pair_inputs(grid) {
        let input = PairScpInput::new(PmsParams::new(a, g, l)?, PmsParams::new(b, g, n)?)?;
        let exact = pcm_procrustean_scp(&input)?;
        let closed = (forms.pair)(&input)?;
        pair.record((exact - closed).abs(), || {
            format!("a={a} g={g} l={l} b={b} d={g} n={n}")
        });
    }

    for &a in &grid.alphas {
        for &l in &grid.lams {
            let Ok(p) = PmsParams::new(a, 0.0, l) else { continue };
            let branch = pcm_recycle_branch(&pms_density(p)?)?;
            let (next, probs) = (forms.step)(RecycleState::new(a, l)?)?;
            let mut dev = (branch.probs.c - probs.c)
                .abs()
                .max((branch.probs.p_succ - probs.p_succ).abs());
            if let Some(state) = &branch.recycled {
                match form_one_witness(state)? {
                    Some(w) => {
                        // orient so that α ≥ ½ like the recursion
                        let alpha = w.params.alpha.max(1.0 - w.params.alpha);
                        let expected = next.alpha_k.max(1.0 - next.alpha_k);
                        dev = dev
                            .max((alpha - expected).abs())
                            .max((w.params.lam - next.lam_k).abs())
                            .max(w.params.gamma);
                    }
                    None => dev = f64::INFINITY,
                }
            }
            step.record(dev, || format!("a={a} l={l}"));
            mixed.record((branch.probs.f - probs.f).abs(), || format!("a={a} l={l}"));
        }
    }
    Ok(vec![pair, step, mixed])
}

/// Direct and hybrid swapping against their formulas on the `γ = 0` slice.
pub fn verify_swapping(grid: &VerifyGrid, forms: &ClosedForms) -> Result<Vec<CaseReport>, ProtocolError> {
    check_grid(grid)?;
    let mut direct = CaseReport::new("direct_swap_vs_formula", ORACLE_TOL);
    let mut hybrid = CaseReport::new("hybrid_swap_vs_formula", ORACLE_TOL);
    for (g, a, l, b, n) in pair_inputs(grid) {
        if g != 0.0 {
            continue;
        }
        let d = (direct_swap_scp(a, l, b, n)? - (forms.direct)(a, l, b, n)?).abs();
        direct.record(d, || format!("a={a} l={l} b={b} n={n}"));
        let h = (hybrid_swap_scp(a, l, b, n)? - (forms.hybrid)(a, l, b, n)?).abs();
        hybrid.record(h, || format!("a={a} l={l} b={b} n={n}"));
    }
    Ok(vec![direct, hybrid])
}

/// Compare every closed form with its branch-enumeration counterpart.
pub fn run_verification(grid: &VerifyGrid, forms: &ClosedForms) -> Result<VerifyReport, ProtocolError> {
    let mut cases = verify_pairwise(grid, forms)?;
    cases.extend(verify_swapping(grid, forms)?);
    Ok(VerifyReport { cases })
}
