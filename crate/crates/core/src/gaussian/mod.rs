//! Entanglement of Gaussian states from their covariance matrices.

mod covariance;
mod measures;
pub mod states;

use thiserror::Error;

use crate::linalg::LinalgError;

pub use covariance::{symplectic_form, CovarianceMatrix, Mode, Physicality, PHYSICALITY_TOL};
pub use measures::{
    contangle, log_negativity, min_residual_contangle, residual_contangle,
    tripartite_entanglement, ModePartition, TripartiteEntanglement, MONOGAMY_FLOOR,
    TRIPARTITE_THRESHOLD,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GaussianError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("covariance matrix is not symmetric (max deviation {0:.3e})")]
    NotSymmetric(f64),
    #[error(
        "covariance matrix violates the uncertainty principle \
         (min eigenvalue of V + iΩ/2 = {min_eigenvalue:.3e}, min variance = {min_variance:.3e})"
    )]
    Unphysical { min_eigenvalue: f64, min_variance: f64 },
    #[error("numerical degeneracy: {0}")]
    NumericalDegeneracy(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}
