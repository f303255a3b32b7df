//! Exact density-matrix algebra on a handful of qubits.
//!
//! Everything here is plain linear algebra on matrices of dimension at most
//! `2^MAX_QUBITS`. Measurements never sample: they return a [`BranchTree`]
//! listing every outcome together with its probability and the normalized
//! post-measurement state of the unmeasured qubits.
//!
//! Qubit 0 is the leftmost tensor factor, so the basis label `"01"` on two
//! qubits means qubit 0 is `|0⟩` and qubit 1 is `|1⟩`.

mod density;
mod form;
mod matrix;
mod params;

pub use density::{
    apply_kraus, apply_unitary, bell_measure_swap, measure_computational, pms_density,
    procrustean_filter, reduced_state, singlet_fidelity, tensor, Branch, BranchTree,
    DensityMatrix, BELL_LABELS,
};
pub use form::{form_one_witness, FormOneWitness};
pub use matrix::{gates, ComplexMatrix};
pub use params::{PmsParams, PureSchmidt};

use thiserror::Error;

pub const TAU_HERM: f64 = 1e-10;
pub const TAU_TRACE: f64 = 1e-10;
pub const TAU_PROB: f64 = 1e-10;
pub const TAU_PSD: f64 = 1e-9;
pub const TAU_UNITARY: f64 = 1e-10;

/// Largest register the oracle will build (1024-dimensional).
pub const MAX_QUBITS: usize = 10;

/// Branches below this probability are kept as placeholders without a state.
pub const ZERO_BRANCH: f64 = 1e-13;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QStateError {
    #[error("matrix dimension {0} is not a positive power of two")]
    BadDimension(usize),
    #[error("matrix is not square")]
    NotSquare,
    #[error("{0} qubits exceeds the supported maximum")]
    TooManyQubits(usize),
    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),
    #[error("trace is {0}, expected 1")]
    BadTrace(f64),
    #[error("matrix has negative eigenvalue {0:e}")]
    NotPositive(f64),
    #[error("operator is not unitary on the target space")]
    NotUnitary,
    #[error("Kraus operators do not resolve the identity")]
    IncompleteKraus,
    #[error("invalid target qubits {targets:?} for a {num_qubits}-qubit state")]
    BadTargets {
        targets: Vec<usize>,
        num_qubits: usize,
    },
    #[error("operator acts on {op} qubits but {targets} targets were given")]
    ArityMismatch { op: usize, targets: usize },
    #[error("parameter out of domain: {0}")]
    ParameterDomain(String),
    #[error("state is not pure (purity {0})")]
    NotPure(f64),
    #[error("json: {0}")]
    Json(String),
}
