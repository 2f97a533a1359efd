//! Dense complex linear algebra: LU factorization, determinants, solves and
//! singular-value based norms.
//!
//! Conditioning is always measured through singular values; no adjugate or
//! cofactor route is used at runtime.

mod lu;
mod matrix;
mod svd;

#[cfg(test)]
pub(crate) mod test_support;

use thiserror::Error;

pub use lu::{determinant, lu_factor, solve, LuFactorization};
pub use matrix::ComplexMatrix;
pub use svd::{
    condition_from_singular, condition_number_2, inverse_norm_from_singular, inverse_two_norm,
    singular_values, singular_values_with, two_norm, SvdConfig, SINGULAR_RATIO,
};

pub type C64 = num_complex::Complex64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericsError {
    #[error("matrix must have at least one row and one column")]
    EmptyMatrix,
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("shape mismatch: expected {expected:?}, found {found:?}")]
    ShapeMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("exactly singular: zero pivot in column {column}")]
    ExactlySingular { column: usize },
    #[error("singular value iteration did not converge within {iterations} iterations")]
    ConvergenceFailure { iterations: usize },
}
