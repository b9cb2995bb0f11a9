//! Reference Gaussian states and single/two-mode symplectic transformations.
//!
//! Transformations act on the full `2n`-dimensional quadrature vector and are
//! applied with [`CovarianceMatrix::transformed`].

use crate::linalg::RealMatrix;

use super::{CovarianceMatrix, Mode};

fn default_labels(n: usize) -> Vec<Mode> {
    (0..n).map(|k| Mode::ALL[k % 3]).collect()
}

fn labelled(m: RealMatrix, n: usize) -> CovarianceMatrix {
    CovarianceMatrix::new(m, default_labels(n)).expect("constructed symmetric")
}

pub fn vacuum(n_modes: usize) -> CovarianceMatrix {
    labelled(RealMatrix::identity(2 * n_modes).scale(0.5), n_modes)
}

/// Product of thermal states with the given mean occupations.
pub fn thermal(occupations: &[f64]) -> CovarianceMatrix {
    let diag: Vec<f64> = occupations
        .iter()
        .flat_map(|&n| [n + 0.5, n + 0.5])
        .collect();
    labelled(RealMatrix::from_diag(&diag), occupations.len())
}

/// Two-mode squeezed vacuum with squeezing parameter `r`.
pub fn two_mode_squeezed_vacuum(r: f64) -> CovarianceMatrix {
    let c = 0.5 * (2.0 * r).cosh();
    let s = 0.5 * (2.0 * r).sinh();
    let m = RealMatrix::from_rows(&[
        [c, 0.0, s, 0.0],
        [0.0, c, 0.0, -s],
        [s, 0.0, c, 0.0],
        [0.0, -s, 0.0, c],
    ]);
    labelled(m, 2)
}

/// Phase rotation of one mode by `theta`.
pub fn phase_rotation(n_modes: usize, mode: usize, theta: f64) -> RealMatrix {
    let mut s = RealMatrix::identity(2 * n_modes);
    let (sin, cos) = theta.sin_cos();
    let (x, y) = (2 * mode, 2 * mode + 1);
    s[(x, x)] = cos;
    s[(x, y)] = sin;
    s[(y, x)] = -sin;
    s[(y, y)] = cos;
    s
}

/// Beam splitter mixing modes `j` and `k` with angle `theta`.
pub fn beam_splitter(n_modes: usize, j: usize, k: usize, theta: f64) -> RealMatrix {
    let mut s = RealMatrix::identity(2 * n_modes);
    let (sin, cos) = theta.sin_cos();
    for q in 0..2 {
        let (a, b) = (2 * j + q, 2 * k + q);
        s[(a, a)] = cos;
        s[(a, b)] = sin;
        s[(b, a)] = -sin;
        s[(b, b)] = cos;
    }
    s
}

/// Single-mode squeezer `diag(e^{-r}, e^{r})` on one mode.
pub fn single_mode_squeeze(n_modes: usize, mode: usize, r: f64) -> RealMatrix {
    let mut s = RealMatrix::identity(2 * n_modes);
    s[(2 * mode, 2 * mode)] = (-r).exp();
    s[(2 * mode + 1, 2 * mode + 1)] = r.exp();
    s
}
