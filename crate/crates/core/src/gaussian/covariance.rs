use std::fmt;

use serde::{Deserialize, Serialize};

use crate::linalg::{eigenvalues_general, symmetric_eigenvalues, ComplexMatrix, RealMatrix};

use super::GaussianError;

/// Default absolute tolerance of the physicality and pairing checks, scaled
/// by `max(1, max|V_ij|)`.
pub const PHYSICALITY_TOL: f64 = 1e-8;

const SYMMETRY_TOL: f64 = 1e-10;

/// Which physical mode a pair of quadratures belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Cavity,
    Magnon,
    Phonon,
}

impl Mode {
    pub const ALL: [Mode; 3] = [Mode::Cavity, Mode::Magnon, Mode::Phonon];

    pub fn symbol(self) -> char {
        match self {
            Mode::Cavity => 'a',
            Mode::Magnon => 'm',
            Mode::Phonon => 'b',
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// Symmetric `2n×2n` covariance matrix in `(X₁, Y₁, …, X_n, Y_n)` order, with
/// vacuum normalized to `I/2`.
#[derive(Clone, Debug, PartialEq)]
pub struct CovarianceMatrix {
    matrix: RealMatrix,
    labels: Vec<Mode>,
}

/// Outcome of the uncertainty-principle check.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Physicality {
    /// Smallest eigenvalue of the Hermitian matrix `V + (i/2)Ω`.
    pub min_eigenvalue: f64,
    /// Smallest diagonal entry of `V`. Squeezed states go below 1/2, so this
    /// is reported but not part of the verdict.
    pub min_variance: f64,
    pub tolerance: f64,
}

impl Physicality {
    pub fn is_physical(&self) -> bool {
        self.min_eigenvalue >= -self.tolerance
    }
}

/// Blockwise symplectic form `⊕ [[0, 1], [-1, 0]]`.
pub fn symplectic_form(n_modes: usize) -> RealMatrix {
    let mut om = RealMatrix::zeros(2 * n_modes, 2 * n_modes);
    for k in 0..n_modes {
        om[(2 * k, 2 * k + 1)] = 1.0;
        om[(2 * k + 1, 2 * k)] = -1.0;
    }
    om
}

impl CovarianceMatrix {
    pub fn new(matrix: RealMatrix, labels: Vec<Mode>) -> Result<Self, GaussianError> {
        if !matrix.is_square() || matrix.rows() != 2 * labels.len() || labels.is_empty() {
            return Err(GaussianError::Domain(format!(
                "a {}-mode covariance matrix must be {}x{}, got {}x{}",
                labels.len(),
                2 * labels.len(),
                2 * labels.len(),
                matrix.rows(),
                matrix.cols()
            )));
        }
        if !matrix.is_finite() {
            return Err(GaussianError::Domain("covariance matrix has non-finite entries".into()));
        }
        let asym = matrix.asymmetry();
        if asym > SYMMETRY_TOL * matrix.max_abs().max(1.0) {
            return Err(GaussianError::NotSymmetric(asym));
        }
        Ok(Self { matrix, labels })
    }

    /// Three-mode steady state labelled (cavity, magnon, phonon).
    pub fn three_mode(matrix: RealMatrix) -> Result<Self, GaussianError> {
        Self::new(matrix, Mode::ALL.to_vec())
    }

    pub fn n_modes(&self) -> usize {
        self.labels.len()
    }

    pub fn matrix(&self) -> &RealMatrix {
        &self.matrix
    }

    pub fn labels(&self) -> &[Mode] {
        &self.labels
    }

    /// Index of the first mode carrying `label`.
    pub fn index_of(&self, label: Mode) -> Option<usize> {
        self.labels.iter().position(|&l| l == label)
    }

    fn scale(&self) -> f64 {
        self.matrix.max_abs().max(1.0)
    }

    /// Keeps the listed modes, in the given order.
    pub fn reduce_modes(&self, keep: &[usize]) -> Result<Self, GaussianError> {
        if keep.is_empty() {
            return Err(GaussianError::Domain("mode set must be nonempty".into()));
        }
        for (i, &k) in keep.iter().enumerate() {
            if k >= self.n_modes() {
                return Err(GaussianError::Domain(format!(
                    "mode index {k} out of range for {} modes",
                    self.n_modes()
                )));
            }
            if keep[..i].contains(&k) {
                return Err(GaussianError::Domain(format!("mode index {k} repeated")));
            }
        }
        let idx: Vec<usize> = keep.iter().flat_map(|&k| [2 * k, 2 * k + 1]).collect();
        Ok(Self {
            matrix: self.matrix.select(&idx, &idx),
            labels: keep.iter().map(|&k| self.labels[k]).collect(),
        })
    }

    /// `P·V·P` with `P` flipping the sign of the Y quadrature of one mode.
    pub fn partial_transpose(&self, mode: usize) -> Result<Self, GaussianError> {
        if mode >= self.n_modes() {
            return Err(GaussianError::Domain(format!(
                "mode index {mode} out of range for {} modes",
                self.n_modes()
            )));
        }
        let y = 2 * mode + 1;
        let mut m = self.matrix.clone();
        let dim = m.rows();
        for j in 0..dim {
            if j != y {
                m[(y, j)] = -m[(y, j)];
                m[(j, y)] = -m[(j, y)];
            }
        }
        Ok(Self {
            matrix: m,
            labels: self.labels.clone(),
        })
    }

    /// `S·V·Sᵀ` for a `2n×2n` transformation `S`.
    pub fn transformed(&self, s: &RealMatrix) -> Result<Self, GaussianError> {
        let m = s.matmul(&self.matrix)?.matmul(&s.transpose())?;
        Ok(Self {
            matrix: m.symmetrized(),
            labels: self.labels.clone(),
        })
    }

    /// Symplectic eigenvalues `ν_j = |Im λ_j|` of `Ω·V`, ascending.
    ///
    /// The spectrum of `Ω·V` for a positive-definite `V` is `{±iν_j}`; any
    /// eigenvalue with a real part, or a conjugate pair that does not match,
    /// beyond tolerance signals a degenerate or indefinite input.
    pub fn symplectic_eigenvalues(&self) -> Result<Vec<f64>, GaussianError> {
        let n = self.n_modes();
        let tol = PHYSICALITY_TOL * self.scale();
        let ev = eigenvalues_general(&symplectic_form(n).matmul(&self.matrix)?)?;
        if let Some(z) = ev.iter().find(|z| z.re.abs() > tol) {
            return Err(GaussianError::NumericalDegeneracy(format!(
                "eigenvalue {z} of Omega*V is not imaginary"
            )));
        }
        let mut mags: Vec<f64> = ev.iter().map(|z| z.im.abs()).collect();
        mags.sort_by(f64::total_cmp);
        let mut nu = Vec::with_capacity(n);
        for pair in mags.chunks(2) {
            if (pair[0] - pair[1]).abs() > tol {
                return Err(GaussianError::NumericalDegeneracy(format!(
                    "unpaired symplectic spectrum: {} vs {}",
                    pair[0], pair[1]
                )));
            }
            nu.push(0.5 * (pair[0] + pair[1]));
        }
        Ok(nu)
    }

    /// Evaluates the uncertainty principle `V + (i/2)Ω ≥ 0`.
    pub fn physicality(&self) -> Result<Physicality, GaussianError> {
        let n = self.n_modes();
        let half_omega = symplectic_form(n).scale(0.5);
        let herm = ComplexMatrix::from_parts(&self.matrix, &half_omega)?;
        let ev = symmetric_eigenvalues(&herm.hermitian_embedding())?;
        let min_variance = self
            .matrix
            .diagonal()
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        Ok(Physicality {
            min_eigenvalue: ev[0],
            min_variance,
            tolerance: PHYSICALITY_TOL * self.scale(),
        })
    }

    pub fn check_physical(&self) -> Result<(), GaussianError> {
        let p = self.physicality()?;
        if p.is_physical() {
            Ok(())
        } else {
            Err(GaussianError::Unphysical {
                min_eigenvalue: p.min_eigenvalue,
                min_variance: p.min_variance,
            })
        }
    }
}
