//! Entanglement percolation with partially entangled mixed states.
//!
//! * [`qstate`]: exact density-matrix algebra used as a ground-truth oracle.
//! * [`protocols`]: closed-form singlet conversion probabilities.
//! * [`oracle`]: branch-enumeration implementations of the protocols and the
//!   cross-validation suite that compares them to the closed forms.
//! * [`percolation`]: lattices, union-find clustering, thresholds.
//! * [`network`]: feasibility of general networks and lattice-level runs.
//! * [`sweep`]: tabular results and their CSV/JSON encodings.

pub mod network;
pub mod oracle;
pub mod percolation;
pub mod protocols;
pub mod qstate;
pub mod sweep;

pub use qstate::{PmsParams, PureSchmidt};
