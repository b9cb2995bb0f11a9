//! Independent oracles shared by the integration and acceptance tests.
//!
//! None of these call into the library's eigen or Lyapunov solvers.

#![allow(dead_code)]

use magnomech::gaussian::states::{beam_splitter, phase_rotation, single_mode_squeeze, thermal};
use magnomech::{CovarianceMatrix, RealMatrix};
use num_complex::Complex64;
use rand::Rng;

/// Characteristic polynomial coefficients `[1, c1, ..., cn]` of
/// `det(λI - m)` by the Faddeev-LeVerrier recursion.
pub fn char_poly(m: &RealMatrix) -> Vec<f64> {
    let n = m.rows();
    let mut coeffs = vec![1.0];
    let mut mk = RealMatrix::zeros(n, n);
    for k in 1..=n {
        let prev = *coeffs.last().unwrap();
        let shifted = mk.add(&RealMatrix::identity(n).scale(prev)).unwrap();
        mk = m.matmul(&shifted).unwrap();
        let trace: f64 = mk.diagonal().iter().sum();
        coeffs.push(-trace / k as f64);
    }
    coeffs
}

fn horner(coeffs: &[f64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

/// Roots of a monic polynomial by Durand-Kerner iteration, sorted by
/// (real, imaginary) part.
pub fn poly_roots(coeffs: &[f64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let radius = 1.0 + coeffs[1..].iter().fold(0.0f64, |a, c| a.max(c.abs()));
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32) * radius).collect();
    for _ in 0..5000 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    denom *= z[i] - z[j];
                }
            }
            let step = horner(coeffs, z[i]) / denom;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 * radius {
            break;
        }
    }
    sort_complex(&mut z);
    z
}

pub fn sort_complex(z: &mut [Complex64]) {
    z.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

/// Largest distance between two spectra after matching each element of `a`
/// to its nearest unused element of `b`.
pub fn spectrum_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let mut used = vec![false; b.len()];
    let mut worst = 0.0f64;
    for x in a {
        let (j, d) = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, y)| (j, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .unwrap();
        used[j] = true;
        worst = worst.max(d);
    }
    worst
}

fn lyapunov_rhs(a: &RealMatrix, v: &RealMatrix, d: &RealMatrix) -> RealMatrix {
    let av = a.matmul(v).unwrap();
    av.add(&av.transpose()).unwrap().add(d).unwrap()
}

/// Integrates dV/dt = AV + VAᵀ + D from V = 0 to `t_end` with classical RK4.
pub fn lyapunov_ode(a: &RealMatrix, d: &RealMatrix, t_end: f64, h: f64) -> RealMatrix {
    let n = a.rows();
    let steps = (t_end / h).ceil() as usize;
    let mut v = RealMatrix::zeros(n, n);
    for _ in 0..steps {
        let k1 = lyapunov_rhs(a, &v, d);
        let k2 = lyapunov_rhs(a, &v.add(&k1.scale(0.5 * h)).unwrap(), d);
        let k3 = lyapunov_rhs(a, &v.add(&k2.scale(0.5 * h)).unwrap(), d);
        let k4 = lyapunov_rhs(a, &v.add(&k3.scale(h)).unwrap(), d);
        let incr = k1
            .add(&k2.scale(2.0))
            .unwrap()
            .add(&k3.scale(2.0))
            .unwrap()
            .add(&k4)
            .unwrap()
            .scale(h / 6.0);
        v = v.add(&incr).unwrap();
    }
    v
}

pub fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> RealMatrix {
    let data = (0..rows * cols).map(|_| rng.random_range(-1.0..1.0)).collect();
    RealMatrix::from_vec(rows, cols, data).unwrap()
}

/// Random matrix shifted by its Gershgorin radius, so every eigenvalue has
/// real part at most `-margin`.
pub fn random_stable<R: Rng>(rng: &mut R, n: usize, margin: f64) -> RealMatrix {
    let m = random_matrix(rng, n, n);
    let radius = (0..n)
        .map(|i| m.row(i).iter().map(|x| x.abs()).sum::<f64>() - m[(i, i)])
        .fold(0.0f64, f64::max);
    m.sub(&RealMatrix::identity(n).scale(radius + margin)).unwrap()
}

/// Random positive semidefinite diagonal diffusion matrix.
pub fn random_diffusion<R: Rng>(rng: &mut R, n: usize) -> RealMatrix {
    let diag: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..2.0)).collect();
    RealMatrix::from_diag(&diag)
}

/// Random physical three-mode state: thermal noise, local squeezing and
/// passive mixing.
pub fn random_three_mode_state<R: Rng>(rng: &mut R) -> CovarianceMatrix {
    let occupations: Vec<f64> = (0..3).map(|_| rng.random_range(0.0..1.5)).collect();
    let mut v = thermal(&occupations);
    for mode in 0..3 {
        let r = rng.random_range(-1.2..1.2);
        v = v.transformed(&single_mode_squeeze(3, mode, r)).unwrap();
        let th = rng.random_range(0.0..std::f64::consts::TAU);
        v = v.transformed(&phase_rotation(3, mode, th)).unwrap();
    }
    for (j, k) in [(0, 1), (1, 2), (0, 2), (0, 1)] {
        let th = rng.random_range(0.0..std::f64::consts::PI);
        v = v.transformed(&beam_splitter(3, j, k, th)).unwrap();
    }
    v
}
