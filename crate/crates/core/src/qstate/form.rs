//! Recognizing two-qubit states that are locally-unitarily equivalent to
//! `λ|ψ⟩⟨ψ| + (1−λ)|01⟩⟨01|`.
//!
//! Such a state has rank at most two. In the rank-two case its support must
//! contain a product vector `|u⟩|v⟩` such that removing the largest admissible
//! multiple of `|uv⟩⟨uv|` leaves a rank-one remainder `|ψ'⟩⟨ψ'|` with no
//! component along `|u⊥⟩|v⊥⟩`. The candidate product vectors are the roots of
//! `det(x W₁ + y W₂) = 0` for an eigenbasis `W₁, W₂` of the support, each
//! reshaped as a 2×2 matrix.

use num_complex::Complex64;

use super::{DensityMatrix, PmsParams, QStateError};

const RANK_TOL: f64 = 1e-9;
const MATCH_TOL: f64 = 1e-7;

/// Local frame and parameters recovered from a form-(1) state.
#[derive(Clone, Debug, PartialEq)]
pub struct FormOneWitness {
    pub params: PmsParams,
    /// Local vectors `u` (first qubit) and `v` (second qubit) of the noise term.
    pub noise_factors: ([Complex64; 2], [Complex64; 2]),
}

fn perp(u: [Complex64; 2]) -> [Complex64; 2] {
    [-u[1].conj(), u[0].conj()]
}

fn kron2(u: [Complex64; 2], v: [Complex64; 2]) -> [Complex64; 4] {
    [u[0] * v[0], u[0] * v[1], u[1] * v[0], u[1] * v[1]]
}

fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn normalize(v: &mut [Complex64]) -> f64 {
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if n > 0.0 {
        v.iter_mut().for_each(|z| *z /= n);
    }
    n
}

/// Factor a (numerically) product 4-vector into `u ⊗ v`.
fn factor_product(w: &[Complex64; 4]) -> ([Complex64; 2], [Complex64; 2]) {
    // rows of the 2x2 reshape are u_i * v
    let r0 = [w[0], w[1]];
    let r1 = [w[2], w[3]];
    let mut v = if inner(&r0, &r0).re >= inner(&r1, &r1).re {
        r0
    } else {
        r1
    };
    normalize(&mut v);
    let mut u = [inner(&v, &r0), inner(&v, &r1)];
    normalize(&mut u);
    (u, v)
}

fn solve_quadratic(a: Complex64, b: Complex64, c: Complex64) -> Vec<Complex64> {
    if a.norm() < 1e-14 {
        if b.norm() < 1e-14 {
            return vec![];
        }
        return vec![-c / b];
    }
    let disc = (b * b - a * c * 4.0).sqrt();
    vec![(-b + disc) / (a * 2.0), (-b - disc) / (a * 2.0)]
}

fn det2(w: &[Complex64; 4]) -> Complex64 {
    w[0] * w[3] - w[1] * w[2]
}

/// Try a product vector `e` in the support; on success return the witness.
fn try_noise_vector(
    rho: &DensityMatrix,
    support: &[(f64, Vec<Complex64>)],
    e: [Complex64; 4],
) -> Option<FormOneWitness> {
    let (u, v) = factor_product(&e);
    let e = kron2(u, v);
    // largest μ with ρ − μ|e⟩⟨e| ⪰ 0 is 1 / ⟨e|ρ⁺|e⟩
    let inv: f64 = support
        .iter()
        .map(|(val, w)| inner(w, &e).norm_sqr() / val)
        .sum();
    if !inv.is_finite() || inv <= 0.0 {
        return None;
    }
    let mu = (1.0 / inv).min(1.0);
    let m = rho.matrix().inner();
    let mut rem = [[Complex64::new(0.0, 0.0); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            rem[i][j] = m[(i, j)] - e[i] * e[j].conj() * mu;
        }
    }
    let lam = 1.0 - mu;
    // remainder must be rank one: pick its largest column as ψ'
    let col = (0..4)
        .max_by(|&a, &b| rem[a][a].re.total_cmp(&rem[b][b].re))
        .unwrap();
    let mut psi: Vec<Complex64> = (0..4).map(|i| rem[i][col]).collect();
    if normalize(&mut psi) < 1e-12 || lam < RANK_TOL {
        return witness_from(u, v, &e, lam.max(0.0), &e);
    }
    let scale = lam;
    for i in 0..4 {
        for j in 0..4 {
            if (rem[i][j] - psi[i] * psi[j].conj() * scale).norm() > MATCH_TOL {
                return None;
            }
        }
    }
    let forbidden = kron2(perp(u), perp(v));
    if inner(&forbidden, &psi).norm() > MATCH_TOL {
        return None;
    }
    witness_from(u, v, &e, lam, &psi)
}

fn witness_from(
    u: [Complex64; 2],
    v: [Complex64; 2],
    e: &[Complex64; 4],
    lam: f64,
    psi: &[Complex64],
) -> Option<FormOneWitness> {
    // frame: |00⟩ ↦ |u v⊥⟩, |11⟩ ↦ |u⊥ v⟩, |01⟩ ↦ |u v⟩
    let alpha = inner(&kron2(u, perp(v)), psi).norm_sqr();
    let gamma = inner(e, psi).norm_sqr();
    let params = PmsParams {
        alpha: alpha.clamp(0.0, 1.0),
        gamma: gamma.clamp(0.0, 1.0 - alpha.clamp(0.0, 1.0)),
        lam: lam.clamp(0.0, 1.0),
    };
    Some(FormOneWitness {
        params,
        noise_factors: (u, v),
    })
}

/// Returns a witness if `s` is a two-qubit state of the form
/// `λ'|ψ'⟩⟨ψ'| + (1−λ')|e⟩⟨e|` up to local unitaries, `None` otherwise.
pub fn form_one_witness(s: &DensityMatrix) -> Result<Option<FormOneWitness>, QStateError> {
    if s.num_qubits() != 2 {
        return Err(QStateError::BadTargets {
            targets: vec![0, 1],
            num_qubits: s.num_qubits(),
        });
    }
    let eig = s.eigen_decomposition();
    let support: Vec<(f64, Vec<Complex64>)> =
        eig.into_iter().filter(|(val, _)| *val > RANK_TOL).collect();
    match support.len() {
        0 => Ok(None),
        1 => {
            // pure: Schmidt form is ρ(a, 0, 1) in the Schmidt frame
            let reduced = super::reduced_state(s, &[0])?;
            let a = reduced.eigenvalues()[1];
            Ok(Some(FormOneWitness {
                params: PmsParams {
                    alpha: a.clamp(0.0, 1.0),
                    gamma: 0.0,
                    lam: 1.0,
                },
                noise_factors: (
                    [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
                    [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
                ),
            }))
        }
        2 => {
            let w1: [Complex64; 4] = support[0].1.clone().try_into().unwrap();
            let w2: [Complex64; 4] = support[1].1.clone().try_into().unwrap();
            // det(t W1 + W2) = t² det W1 + t·cross + det W2
            let cross = w1[0] * w2[3] + w2[0] * w1[3] - w1[1] * w2[2] - w2[1] * w1[2];
            let (a, c) = (det2(&w1), det2(&w2));
            let mut candidates: Vec<[Complex64; 4]> = Vec::new();
            if a.norm() < 1e-12 && cross.norm() < 1e-12 && c.norm() < 1e-12 {
                // every vector in the support is a product vector
                candidates.push(w1);
                candidates.push(w2);
            } else {
                if a.norm() < 1e-12 {
                    candidates.push(w1);
                }
                for t in solve_quadratic(a, cross, c) {
                    let mut e: Vec<Complex64> =
                        (0..4).map(|i| t * w1[i] + w2[i]).collect();
                    normalize(&mut e);
                    candidates.push(e.try_into().unwrap());
                }
            }
            Ok(candidates
                .into_iter()
                .filter(|e| det2(e).norm() < 1e-6)
                .find_map(|e| try_noise_vector(s, &support, e)))
        }
        _ => Ok(None),
    }
}
