use super::solve::LuFactors;
use super::{LinalgError, RealMatrix};

/// Solves `a·V + V·aᵀ + d = 0` for symmetric `V`.
///
/// The equation is vectorized as `(I⊗a + a⊗I)·vec(V) = -vec(d)` and solved
/// densely, followed by one refinement step and symmetrization. A singular
/// vectorized operator means some pair of eigenvalues of `a` sums to zero,
/// which for the callers here signals an unstable drift matrix.
pub fn lyapunov_solve(a: &RealMatrix, d: &RealMatrix) -> Result<RealMatrix, LinalgError> {
    if !a.is_square() || !d.is_square() || a.rows() != d.rows() {
        return Err(LinalgError::Dimension(format!(
            "Lyapunov operands must be square and equal in size: {}x{} and {}x{}",
            a.rows(),
            a.cols(),
            d.rows(),
            d.cols()
        )));
    }
    let n = a.rows();
    let eye = RealMatrix::identity(n);
    let op = eye.kron(a).add(&a.kron(&eye))?;
    let lu = LuFactors::new(&op).map_err(|e| match e {
        LinalgError::Singular { pivot, .. } => LinalgError::Unstable { pivot },
        other => other,
    })?;
    let rhs: Vec<f64> = d.vec_col_major().iter().map(|x| -x).collect();
    let mut x = lu.solve(&rhs)?;
    let ax = op.matvec(&x)?;
    let resid: Vec<f64> = rhs.iter().zip(&ax).map(|(b, y)| b - y).collect();
    let dx = lu.solve(&resid)?;
    for (xi, di) in x.iter_mut().zip(&dx) {
        *xi += di;
    }
    let v = RealMatrix::from_col_major(n, n, &x)?;
    if !v.is_finite() {
        return Err(LinalgError::Unstable { pivot: 0.0 });
    }
    Ok(v.symmetrized())
}

/// Frobenius norm of `a·V + V·aᵀ + d`.
pub fn lyapunov_residual(a: &RealMatrix, v: &RealMatrix, d: &RealMatrix) -> f64 {
    let av = a.matmul(v).expect("shape checked by caller");
    let vat = v.matmul(&a.transpose()).expect("shape checked by caller");
    av.add(&vat)
        .and_then(|s| s.add(d))
        .map(|r| r.frobenius_norm())
        .unwrap_or(f64::INFINITY)
}

/// Residual relative to the scale `‖a‖·‖V‖ + ‖d‖` (Frobenius norms).
pub fn lyapunov_relative_residual(a: &RealMatrix, v: &RealMatrix, d: &RealMatrix) -> f64 {
    let scale = a.frobenius_norm() * v.frobenius_norm() + d.frobenius_norm();
    if scale == 0.0 {
        return 0.0;
    }
    lyapunov_residual(a, v, d) / scale
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn negative_identity() {
        let a = RealMatrix::identity(6).scale(-1.0);
        let v = lyapunov_solve(&a, &RealMatrix::identity(6)).unwrap();
        let want = RealMatrix::identity(6).scale(0.5);
        assert!(v.sub(&want).unwrap().max_abs() < 1e-15);
    }

    #[test]
    fn single_thermal_mode_detailed_balance() {
        let kappa = 0.1;
        let n_th = 3.0;
        let a = RealMatrix::from_diag(&[-kappa, -kappa]);
        let d = RealMatrix::identity(2).scale(kappa * (2.0 * n_th + 1.0));
        let v = lyapunov_solve(&a, &d).unwrap();
        let want = (2.0 * n_th + 1.0) / 2.0;
        assert!((v[(0, 0)] - want).abs() < 1e-13);
        assert!((v[(1, 1)] - want).abs() < 1e-13);
        assert_eq!(v[(0, 1)], 0.0);
    }

    #[test]
    fn undamped_oscillator_is_reported_unstable() {
        let a = RealMatrix::from_rows(&[[0.0, 1.0], [-1.0, 0.0]]);
        let err = lyapunov_solve(&a, &RealMatrix::identity(2)).unwrap_err();
        assert!(matches!(err, LinalgError::Unstable { .. }), "{err:?}");
    }

    #[test]
    fn shape_mismatch() {
        let err = lyapunov_solve(&RealMatrix::identity(2), &RealMatrix::identity(3)).unwrap_err();
        assert!(matches!(err, LinalgError::Dimension(_)));
    }
}
