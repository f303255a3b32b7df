use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::QStateError;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Square complex matrix whose dimension is a power of two.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix(DMatrix<Complex64>);

/// JSON debug layout: row-major rows of `[re, im]` pairs.
#[derive(Serialize, Deserialize)]
struct MatrixDump {
    dim: usize,
    rows: Vec<Vec<[f64; 2]>>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Result<Self, QStateError> {
        check_dim(dim)?;
        Ok(Self(DMatrix::zeros(dim, dim)))
    }

    pub fn identity(dim: usize) -> Result<Self, QStateError> {
        check_dim(dim)?;
        Ok(Self(DMatrix::identity(dim, dim)))
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self, QStateError> {
        let dim = rows.len();
        check_dim(dim)?;
        if rows.iter().any(|r| r.len() != dim) {
            return Err(QStateError::NotSquare);
        }
        Ok(Self(DMatrix::from_fn(dim, dim, |i, j| rows[i][j])))
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self, QStateError> {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    /// Outer product `|v⟩⟨v|`.
    pub fn projector(v: &[Complex64]) -> Result<Self, QStateError> {
        check_dim(v.len())?;
        Ok(Self(DMatrix::from_fn(v.len(), v.len(), |i, j| {
            v[i] * v[j].conj()
        })))
    }

    pub(crate) fn from_inner(m: DMatrix<Complex64>) -> Self {
        debug_assert!(m.is_square() && m.nrows().is_power_of_two());
        Self(m)
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn num_qubits(&self) -> usize {
        self.dim().trailing_zeros() as usize
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.0[(row, col)]
    }

    pub fn inner(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    pub fn scale(&self, k: f64) -> Self {
        Self(self.0.map(|z| z * k))
    }

    pub fn kron(&self, other: &Self) -> Self {
        Self(self.0.kronecker(&other.0))
    }

    pub fn matmul(&self, other: &Self) -> Self {
        Self(&self.0 * &other.0)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_abs_diff(&self.adjoint()) <= tol
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        let prod = self.adjoint().matmul(self);
        let id = Self(DMatrix::identity(self.dim(), self.dim()));
        prod.max_abs_diff(&id) <= tol
    }

    pub fn to_json(&self) -> String {
        let dump = MatrixDump {
            dim: self.dim(),
            rows: (0..self.dim())
                .map(|i| {
                    (0..self.dim())
                        .map(|j| {
                            let z = self.0[(i, j)];
                            [z.re, z.im]
                        })
                        .collect()
                })
                .collect(),
        };
        serde_json::to_string(&dump).expect("matrix dump is always serializable")
    }

    pub fn from_json(text: &str) -> Result<Self, QStateError> {
        let dump: MatrixDump =
            serde_json::from_str(text).map_err(|e| QStateError::Json(e.to_string()))?;
        if dump.rows.len() != dump.dim {
            return Err(QStateError::NotSquare);
        }
        let rows: Vec<Vec<Complex64>> = dump
            .rows
            .iter()
            .map(|r| r.iter().map(|[re, im]| Complex64::new(*re, *im)).collect())
            .collect();
        Self::from_rows(&rows)
    }
}

fn check_dim(dim: usize) -> Result<(), QStateError> {
    if dim == 0 || !dim.is_power_of_two() {
        return Err(QStateError::BadDimension(dim));
    }
    if dim > 1 << super::MAX_QUBITS {
        return Err(QStateError::TooManyQubits(dim.trailing_zeros() as usize));
    }
    Ok(())
}

/// Common gates. C-NOT has control on the first target, NOT on the second.
pub mod gates {
    use super::*;

    fn real(rows: &[&[f64]]) -> ComplexMatrix {
        let rows: Vec<Vec<f64>> = rows.iter().map(|r| r.to_vec()).collect();
        ComplexMatrix::from_real_rows(&rows).expect("static gate is well formed")
    }

    pub fn pauli_x() -> ComplexMatrix {
        real(&[&[0.0, 1.0], &[1.0, 0.0]])
    }

    pub fn pauli_z() -> ComplexMatrix {
        real(&[&[1.0, 0.0], &[0.0, -1.0]])
    }

    pub fn pauli_y() -> ComplexMatrix {
        ComplexMatrix::from_rows(&[
            vec![ZERO, Complex64::new(0.0, -1.0)],
            vec![Complex64::new(0.0, 1.0), ZERO],
        ])
        .expect("static gate is well formed")
    }

    pub fn hadamard() -> ComplexMatrix {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        real(&[&[h, h], &[h, -h]])
    }

    pub fn cnot() -> ComplexMatrix {
        real(&[
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, 1.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0],
            &[0.0, 0.0, 1.0, 0.0],
        ])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_power_of_two() {
        assert!(matches!(
            ComplexMatrix::zeros(3),
            Err(QStateError::BadDimension(3))
        ));
        assert!(ComplexMatrix::zeros(0).is_err());
    }

    #[test]
    fn gates_are_unitary() {
        for g in [
            gates::pauli_x(),
            gates::pauli_y(),
            gates::pauli_z(),
            gates::hadamard(),
            gates::cnot(),
        ] {
            assert!(g.is_unitary(1e-12));
        }
        assert!(!ComplexMatrix::from_real_rows(&[vec![1.0, 1.0], vec![0.0, 1.0]])
            .unwrap()
            .is_unitary(1e-10));
    }

    #[test]
    fn json_dump_round_trips() {
        let m = gates::pauli_y().kron(&gates::hadamard());
        let text = m.to_json();
        assert!(text.starts_with("{\"dim\":4,\"rows\":[[["));
        assert_eq!(ComplexMatrix::from_json(&text).unwrap(), m);
    }
}
