use num_complex::Complex64;

use super::{ComplexMatrix, LinalgError, RealMatrix};

/// LU factorization with partial pivoting, `P·m = L·U`, packed in one matrix.
#[derive(Clone, Debug)]
pub struct LuFactors {
    lu: RealMatrix,
    perm: Vec<usize>,
}

impl LuFactors {
    /// Factorizes `m`. A pivot at or below `n·ε·‖m‖∞` is treated as singular.
    pub fn new(m: &RealMatrix) -> Result<Self, LinalgError> {
        if !m.is_square() {
            return Err(LinalgError::Dimension(format!(
                "LU needs a square matrix, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        let n = m.rows();
        let threshold = n as f64 * f64::EPSILON * m.norm_inf();
        let mut lu = m.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (piv_row, piv_mag) = (k..n)
                .map(|i| (i, lu[(i, k)].abs()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if piv_mag <= threshold {
                return Err(LinalgError::Singular {
                    pivot: piv_mag,
                    column: k,
                });
            }
            if piv_row != k {
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(piv_row, j)];
                    lu[(piv_row, j)] = tmp;
                }
                perm.swap(k, piv_row);
            }
            let pivot = lu[(k, k)];
            for i in (k + 1)..n {
                let f = lu[(i, k)] / pivot;
                if f == 0.0 {
                    continue;
                }
                lu[(i, k)] = f;
                for j in (k + 1)..n {
                    lu[(i, j)] -= f * lu[(k, j)];
                }
            }
        }
        Ok(Self { lu, perm })
    }

    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>, LinalgError> {
        let n = self.lu.rows();
        if rhs.len() != n {
            return Err(LinalgError::Dimension(format!(
                "right-hand side of length {} for a {n}x{n} system",
                rhs.len()
            )));
        }
        let mut x: Vec<f64> = self.perm.iter().map(|&p| rhs[p]).collect();
        for i in 0..n {
            let mut acc = x[i];
            for j in 0..i {
                acc -= self.lu[(i, j)] * x[j];
            }
            x[i] = acc;
        }
        for i in (0..n).rev() {
            let mut acc = x[i];
            for j in (i + 1)..n {
                acc -= self.lu[(i, j)] * x[j];
            }
            x[i] = acc / self.lu[(i, i)];
        }
        Ok(x)
    }
}

/// Solves `m·x = rhs` by LU with partial pivoting and one step of iterative
/// refinement.
pub fn solve_linear(m: &RealMatrix, rhs: &[f64]) -> Result<Vec<f64>, LinalgError> {
    let lu = LuFactors::new(m)?;
    let mut x = lu.solve(rhs)?;
    let mx = m.matvec(&x)?;
    let resid: Vec<f64> = rhs.iter().zip(&mx).map(|(b, ax)| b - ax).collect();
    let dx = lu.solve(&resid)?;
    for (xi, di) in x.iter_mut().zip(&dx) {
        *xi += di;
    }
    Ok(x)
}

/// Complex LU solve where exactly-zero pivots are nudged to a tiny value, as
/// inverse iteration needs when the shift is an exact eigenvalue.
pub(crate) fn lu_solve_complex_regularized(
    m: &ComplexMatrix,
    rhs: &[Complex64],
) -> Result<Vec<Complex64>, LinalgError> {
    let n = m.rows();
    if m.cols() != n || rhs.len() != n {
        return Err(LinalgError::Dimension("complex solve shape mismatch".into()));
    }
    let floor = (m.frobenius_norm() * f64::EPSILON).max(f64::MIN_POSITIVE);
    let mut a = m.clone();
    let mut b = rhs.to_vec();
    for k in 0..n {
        let piv = (k..n)
            .max_by(|&i, &j| a[(i, k)].norm().total_cmp(&a[(j, k)].norm()))
            .unwrap_or(k);
        if piv != k {
            for j in 0..n {
                let tmp = a[(k, j)];
                a[(k, j)] = a[(piv, j)];
                a[(piv, j)] = tmp;
            }
            b.swap(k, piv);
        }
        if a[(k, k)].norm() < floor {
            a[(k, k)] = Complex64::new(floor, 0.0);
        }
        let pivot = a[(k, k)];
        for i in (k + 1)..n {
            let f = a[(i, k)] / pivot;
            for j in k..n {
                let akj = a[(k, j)];
                a[(i, j)] -= f * akj;
            }
            let bk = b[k];
            b[i] -= f * bk;
        }
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for i in (0..n).rev() {
        let mut acc = b[i];
        for j in (i + 1)..n {
            acc -= a[(i, j)] * x[j];
        }
        x[i] = acc / a[(i, i)];
    }
    Ok(x)
}
