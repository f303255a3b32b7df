use nalgebra::DMatrix;
use num_complex::Complex64;

use super::matrix::{gates, ComplexMatrix, ONE, ZERO};
use super::{
    PmsParams, PureSchmidt, QStateError, MAX_QUBITS, TAU_HERM, TAU_PSD, TAU_TRACE, TAU_UNITARY,
    ZERO_BRANCH,
};

/// Hermitian, unit-trace, positive semidefinite matrix on `num_qubits` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    num_qubits: usize,
}

impl DensityMatrix {
    /// Validates every invariant, including positivity via a full eigendecomposition.
    pub fn new(matrix: ComplexMatrix) -> Result<Self, QStateError> {
        let state = Self {
            num_qubits: matrix.num_qubits(),
            matrix,
        };
        state.validate()?;
        Ok(state)
    }

    pub fn from_pure(amplitudes: &[Complex64]) -> Result<Self, QStateError> {
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if norm <= 0.0 {
            return Err(QStateError::BadTrace(0.0));
        }
        let m = ComplexMatrix::projector(amplitudes)?.scale(1.0 / norm);
        Ok(Self::from_matrix_unchecked(m))
    }

    pub fn maximally_mixed(num_qubits: usize) -> Result<Self, QStateError> {
        let dim = 1usize << num_qubits;
        let m = ComplexMatrix::identity(dim)?.scale(1.0 / dim as f64);
        Ok(Self::from_matrix_unchecked(m))
    }

    pub(crate) fn from_matrix_unchecked(matrix: ComplexMatrix) -> Self {
        Self {
            num_qubits: matrix.num_qubits(),
            matrix,
        }
    }

    fn from_block(block: DMatrix<Complex64>) -> Self {
        Self::from_matrix_unchecked(ComplexMatrix::from_inner(block))
    }

    pub fn validate(&self) -> Result<(), QStateError> {
        let dev = self.matrix.max_abs_diff(&self.matrix.adjoint());
        if dev > TAU_HERM {
            return Err(QStateError::NotHermitian(dev));
        }
        let tr = self.matrix.trace();
        if (tr.re - 1.0).abs() > TAU_TRACE || tr.im.abs() > TAU_TRACE {
            return Err(QStateError::BadTrace(tr.re));
        }
        let min = self.eigenvalues().into_iter().fold(f64::INFINITY, f64::min);
        if min < -TAU_PSD {
            return Err(QStateError::NotPositive(min));
        }
        Ok(())
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.matrix.get(row, col)
    }

    /// Ascending eigenvalues of the (Hermitian part of the) matrix.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let m = self.matrix.inner();
        let herm = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
        let mut ev: Vec<f64> = herm.symmetric_eigen().eigenvalues.iter().copied().collect();
        ev.sort_by(|a, b| a.total_cmp(b));
        ev
    }

    /// Eigenpairs in descending eigenvalue order.
    pub fn eigen_decomposition(&self) -> Vec<(f64, Vec<Complex64>)> {
        let m = self.matrix.inner();
        let herm = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
        let eig = herm.symmetric_eigen();
        let mut pairs: Vec<(f64, Vec<Complex64>)> = (0..eig.eigenvalues.len())
            .map(|k| {
                (
                    eig.eigenvalues[k],
                    eig.eigenvectors.column(k).iter().copied().collect(),
                )
            })
            .collect();
        pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
        pairs
    }

    pub fn rank(&self, tol: f64) -> usize {
        self.eigenvalues().into_iter().filter(|&v| v > tol).count()
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        self.matrix.inner().iter().map(|z| z.norm_sqr()).sum()
    }

    /// `⟨v|ρ|v⟩` for a (not necessarily normalized) vector.
    pub fn expectation(&self, v: &[Complex64]) -> f64 {
        let m = self.matrix.inner();
        let mut acc = ZERO;
        for i in 0..v.len() {
            for j in 0..v.len() {
                acc += v[i].conj() * m[(i, j)] * v[j];
            }
        }
        acc.re
    }
}

/// One measurement outcome. Branches with probability below the
/// zero-branch cutoff carry no state.
#[derive(Clone, Debug, PartialEq)]
pub struct Branch {
    pub label: String,
    pub probability: f64,
    pub state: Option<DensityMatrix>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct BranchTree {
    pub branches: Vec<Branch>,
}

impl BranchTree {
    pub fn total_probability(&self) -> f64 {
        self.branches.iter().map(|b| b.probability).sum()
    }

    pub fn branch(&self, label: &str) -> Option<&Branch> {
        self.branches.iter().find(|b| b.label == label)
    }

    pub fn probability(&self, label: &str) -> f64 {
        self.branch(label).map_or(0.0, |b| b.probability)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Branch> {
        self.branches.iter()
    }

    fn push(&mut self, label: String, unnormalized: DMatrix<Complex64>) {
        let probability = unnormalized.trace().re.max(0.0);
        let state = (probability >= ZERO_BRANCH)
            .then(|| DensityMatrix::from_block(unnormalized / Complex64::new(probability, 0.0)));
        let probability = if state.is_some() { probability } else { 0.0 };
        self.branches.push(Branch {
            label,
            probability,
            state,
        });
    }
}

/// `λ|ψ⟩⟨ψ| + (1−λ)|01⟩⟨01|` with real nonnegative amplitudes in `|ψ⟩`.
pub fn pms_density(p: PmsParams) -> Result<DensityMatrix, QStateError> {
    p.validate()?;
    let psi = [
        Complex64::new(p.alpha.sqrt(), 0.0),
        Complex64::new(p.gamma.sqrt(), 0.0),
        ZERO,
        Complex64::new(p.beta_weight().sqrt(), 0.0),
    ];
    let e01 = [ZERO, ONE, ZERO, ZERO];
    let m = ComplexMatrix::projector(&psi)?.scale(p.lam);
    let noise = ComplexMatrix::projector(&e01)?.scale(1.0 - p.lam);
    let sum = m.inner() + noise.inner();
    Ok(DensityMatrix::from_matrix_unchecked(ComplexMatrix::from_inner(
        sum,
    )))
}

pub fn tensor(a: &DensityMatrix, b: &DensityMatrix) -> Result<DensityMatrix, QStateError> {
    let n = a.num_qubits + b.num_qubits;
    if n > MAX_QUBITS {
        return Err(QStateError::TooManyQubits(n));
    }
    Ok(DensityMatrix::from_matrix_unchecked(a.matrix.kron(&b.matrix)))
}

fn check_targets(targets: &[usize], num_qubits: usize) -> Result<(), QStateError> {
    let bad = targets.is_empty()
        || targets.iter().any(|&t| t >= num_qubits)
        || (1..targets.len()).any(|i| targets[..i].contains(&targets[i]));
    if bad {
        return Err(QStateError::BadTargets {
            targets: targets.to_vec(),
            num_qubits,
        });
    }
    Ok(())
}

/// Bit mask of qubit `q` inside a basis index of an `n`-qubit register.
#[inline]
fn qubit_mask(q: usize, n: usize) -> usize {
    1 << (n - 1 - q)
}

/// Scatter the local index `k` (targets[0] most significant) into full-register bits.
fn scatter(k: usize, masks: &[usize]) -> usize {
    let t = masks.len();
    masks
        .iter()
        .enumerate()
        .filter(|(i, _)| k & (1 << (t - 1 - i)) != 0)
        .fold(0, |acc, (_, m)| acc | m)
}

/// `Op · M` where `Op` acts on `targets` (as rows) of an `n`-qubit register.
fn left_apply(
    op: &DMatrix<Complex64>,
    m: &DMatrix<Complex64>,
    targets: &[usize],
    n: usize,
) -> DMatrix<Complex64> {
    let masks: Vec<usize> = targets.iter().map(|&q| qubit_mask(q, n)).collect();
    let all: usize = masks.iter().fold(0, |a, b| a | b);
    let local = 1usize << targets.len();
    let offsets: Vec<usize> = (0..local).map(|k| scatter(k, &masks)).collect();
    let dim = m.nrows();
    let mut out = DMatrix::zeros(dim, m.ncols());
    let mut gathered = vec![ZERO; local];
    for col in 0..m.ncols() {
        for base in (0..dim).filter(|r| r & all == 0) {
            for (k, off) in offsets.iter().enumerate() {
                gathered[k] = m[(base | off, col)];
            }
            for (i, off) in offsets.iter().enumerate() {
                let mut acc = ZERO;
                for (j, g) in gathered.iter().enumerate() {
                    acc += op[(i, j)] * g;
                }
                out[(base | off, col)] = acc;
            }
        }
    }
    out
}

/// `Op ρ Op†` on the designated qubits, without normalization.
fn conjugate(
    op: &DMatrix<Complex64>,
    rho: &DMatrix<Complex64>,
    targets: &[usize],
    n: usize,
) -> DMatrix<Complex64> {
    let a = left_apply(op, rho, targets, n);
    left_apply(op, &a.adjoint(), targets, n).adjoint()
}

pub fn apply_unitary(
    s: &DensityMatrix,
    u: &ComplexMatrix,
    targets: &[usize],
) -> Result<DensityMatrix, QStateError> {
    check_targets(targets, s.num_qubits)?;
    if u.dim() != 1 << targets.len() {
        return Err(QStateError::ArityMismatch {
            op: u.num_qubits(),
            targets: targets.len(),
        });
    }
    if !u.is_unitary(TAU_UNITARY) {
        return Err(QStateError::NotUnitary);
    }
    let out = conjugate(u.inner(), s.matrix.inner(), targets, s.num_qubits);
    Ok(DensityMatrix::from_block(out))
}

/// Generalized measurement with Kraus operators `K_i` on `targets`; all qubits are kept.
/// Branches are labeled `k0`, `k1`, ...
pub fn apply_kraus(
    s: &DensityMatrix,
    kraus: &[ComplexMatrix],
    targets: &[usize],
) -> Result<BranchTree, QStateError> {
    check_targets(targets, s.num_qubits)?;
    let dim = 1usize << targets.len();
    let mut completeness = DMatrix::<Complex64>::zeros(dim, dim);
    for k in kraus {
        if k.dim() != dim {
            return Err(QStateError::ArityMismatch {
                op: k.num_qubits(),
                targets: targets.len(),
            });
        }
        completeness += k.inner().adjoint() * k.inner();
    }
    if (completeness - DMatrix::identity(dim, dim))
        .iter()
        .any(|z| z.norm() > TAU_UNITARY)
    {
        return Err(QStateError::IncompleteKraus);
    }
    let mut tree = BranchTree::default();
    for (i, k) in kraus.iter().enumerate() {
        let out = conjugate(k.inner(), s.matrix.inner(), targets, s.num_qubits);
        tree.push(format!("k{i}"), out);
    }
    Ok(tree)
}

/// Indices of the qubits not listed in `targets`, in register order.
fn complement(targets: &[usize], n: usize) -> Vec<usize> {
    (0..n).filter(|q| !targets.contains(q)).collect()
}

/// Basis offsets for the kept qubits, in local order (first kept qubit most significant).
fn kept_offsets(kept: &[usize], n: usize) -> Vec<usize> {
    let masks: Vec<usize> = kept.iter().map(|&q| qubit_mask(q, n)).collect();
    (0..1usize << kept.len())
        .map(|k| scatter(k, &masks))
        .collect()
}

/// Projective measurement in the computational basis. Labels are bit strings
/// in the order of `targets`; branch states live on the unmeasured qubits.
pub fn measure_computational(
    s: &DensityMatrix,
    targets: &[usize],
) -> Result<BranchTree, QStateError> {
    check_targets(targets, s.num_qubits)?;
    let n = s.num_qubits;
    let kept = complement(targets, n);
    let rest = kept_offsets(&kept, n);
    let outcome = kept_offsets(targets, n);
    let rho = s.matrix.inner();
    let mut tree = BranchTree::default();
    for (k, off) in outcome.iter().enumerate() {
        let label: String = (0..targets.len())
            .map(|i| {
                if k & (1 << (targets.len() - 1 - i)) != 0 {
                    '1'
                } else {
                    '0'
                }
            })
            .collect();
        let block = DMatrix::from_fn(rest.len(), rest.len(), |i, j| {
            rho[(rest[i] | off, rest[j] | off)]
        });
        tree.push(label, block);
    }
    Ok(tree)
}

/// Partial trace keeping `keep` (in the given order).
pub fn reduced_state(s: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix, QStateError> {
    check_targets(keep, s.num_qubits)?;
    let n = s.num_qubits;
    let traced = complement(keep, n);
    let kept = kept_offsets(keep, n);
    let env = if traced.is_empty() {
        vec![0]
    } else {
        kept_offsets(&traced, n)
    };
    let rho = s.matrix.inner();
    let block = DMatrix::from_fn(kept.len(), kept.len(), |i, j| {
        env.iter()
            .map(|e| rho[(kept[i] | e, kept[j] | e)])
            .sum::<Complex64>()
    });
    Ok(DensityMatrix::from_block(block))
}

pub const BELL_LABELS: [&str; 4] = ["phi+", "phi-", "psi+", "psi-"];

fn bell_vectors() -> [[Complex64; 4]; 4] {
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    [
        [h, ZERO, ZERO, h],
        [h, ZERO, ZERO, -h],
        [ZERO, h, h, ZERO],
        [ZERO, h, -h, ZERO],
    ]
}

/// Bell measurement on the two `mid` qubits followed by the outcome-dependent
/// Pauli correction (none, Z, X, XZ) on qubit `correct`. Branch states live on
/// the remaining qubits in register order.
pub fn bell_measure_swap(
    s: &DensityMatrix,
    mid: [usize; 2],
    correct: usize,
) -> Result<BranchTree, QStateError> {
    let n = s.num_qubits;
    if n < 4 {
        return Err(QStateError::BadTargets {
            targets: mid.to_vec(),
            num_qubits: n,
        });
    }
    check_targets(&mid, n)?;
    if correct >= n || mid.contains(&correct) {
        return Err(QStateError::BadTargets {
            targets: vec![mid[0], mid[1], correct],
            num_qubits: n,
        });
    }
    let kept = complement(&mid, n);
    let rest = kept_offsets(&kept, n);
    let pair = kept_offsets(&mid, n);
    let correct_local = kept.iter().position(|&q| q == correct).expect("kept qubit");
    let x = gates::pauli_x();
    let z = gates::pauli_z();
    let corrections = [None, Some(z.clone()), Some(x.clone()), Some(x.matmul(&z))];
    let rho = s.matrix.inner();
    let mut tree = BranchTree::default();
    for ((label, b), corr) in BELL_LABELS.iter().zip(bell_vectors()).zip(corrections) {
        let mut block = DMatrix::from_fn(rest.len(), rest.len(), |i, j| {
            let mut acc = ZERO;
            for (x, px) in pair.iter().enumerate() {
                if b[x] == ZERO {
                    continue;
                }
                for (y, py) in pair.iter().enumerate() {
                    if b[y] == ZERO {
                        continue;
                    }
                    acc += b[x].conj() * rho[(rest[i] | px, rest[j] | py)] * b[y];
                }
            }
            acc
        });
        if let Some(c) = corr {
            block = conjugate(c.inner(), &block, &[correct_local], kept.len());
        }
        tree.push((*label).to_string(), block);
    }
    Ok(tree)
}

/// Local filtering of `√a|00⟩ + √(1−a)|11⟩` into a singlet.
pub fn procrustean_filter(a: PureSchmidt) -> (f64, PureSchmidt) {
    let p = 2.0 * a.a.min(1.0 - a.a);
    (p.clamp(0.0, 1.0), PureSchmidt { a: 0.5 })
}

/// Largest overlap with one of the four Bell states.
pub fn singlet_fidelity(s: &DensityMatrix) -> Result<f64, QStateError> {
    if s.num_qubits != 2 {
        return Err(QStateError::BadTargets {
            targets: vec![0, 1],
            num_qubits: s.num_qubits,
        });
    }
    Ok(bell_vectors()
        .iter()
        .map(|b| s.expectation(b))
        .fold(f64::NEG_INFINITY, f64::max))
}
