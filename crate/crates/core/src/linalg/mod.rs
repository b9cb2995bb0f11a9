//! Dense real and complex linear algebra for small systems.
//!
//! Everything here is unit-agnostic; callers scale physical rates before
//! assembling matrices so that entries are of order one.

mod eigen;
mod lyapunov;
mod matrix;
mod solve;

use thiserror::Error;

pub use eigen::{
    eigenvalues_general, eigenvector, spectral_abscissa, symmetric_eigenvalues, MAX_EIGEN_DIM,
};
pub use lyapunov::{lyapunov_relative_residual, lyapunov_residual, lyapunov_solve};
pub use matrix::{ComplexMatrix, RealMatrix};
pub use solve::{solve_linear, LuFactors};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("matrix is singular to working precision (pivot {pivot:.3e} in column {column})")]
    Singular { pivot: f64, column: usize },
    #[error("QR iteration did not converge after {iterations} sweeps ({remaining} eigenvalues left)")]
    NoConvergence { iterations: usize, remaining: usize },
    #[error("Lyapunov operator is singular (pivot {pivot:.3e}); drift matrix is not stable")]
    Unstable { pivot: f64 },
}
