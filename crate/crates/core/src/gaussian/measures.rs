use serde::{Deserialize, Serialize};

use super::{CovarianceMatrix, GaussianError};

/// Numerical floor below which negative residual contangles are rounding.
pub const MONOGAMY_FLOOR: f64 = 1e-9;

/// Minimum residual contangle above which a state counts as genuinely
/// tripartite entangled.
pub const TRIPARTITE_THRESHOLD: f64 = 1e-6;

/// A bipartition `i | j` or `i | jk` of a covariance matrix's modes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModePartition {
    side_one: usize,
    side_two: Vec<usize>,
}

impl ModePartition {
    pub fn new(side_one: usize, side_two: &[usize]) -> Result<Self, GaussianError> {
        if side_two.is_empty() || side_two.len() > 2 {
            return Err(GaussianError::Domain(
                "second side must hold one or two modes".into(),
            ));
        }
        if side_two.contains(&side_one) || (side_two.len() == 2 && side_two[0] == side_two[1]) {
            return Err(GaussianError::Domain("partition modes must be distinct".into()));
        }
        Ok(Self {
            side_one,
            side_two: side_two.to_vec(),
        })
    }

    pub fn pair(i: usize, j: usize) -> Result<Self, GaussianError> {
        Self::new(i, &[j])
    }

    pub fn side_one(&self) -> usize {
        self.side_one
    }

    pub fn side_two(&self) -> &[usize] {
        &self.side_two
    }

    /// All involved modes in ascending index order.
    fn modes(&self) -> Vec<usize> {
        let mut m = vec![self.side_one];
        m.extend_from_slice(&self.side_two);
        m.sort_unstable();
        m
    }
}

/// Logarithmic negativity `max[0, −ln 2ν̃₋]` without the physicality check.
pub(crate) fn log_negativity_unchecked(
    v: &CovarianceMatrix,
    part: &ModePartition,
) -> Result<f64, GaussianError> {
    let modes = part.modes();
    for &k in &modes {
        if k >= v.n_modes() {
            return Err(GaussianError::Domain(format!(
                "mode index {k} out of range for {} modes",
                v.n_modes()
            )));
        }
    }
    let reduced = if modes.len() == v.n_modes() {
        v.clone()
    } else {
        v.reduce_modes(&modes)?
    };
    let pos = modes
        .iter()
        .position(|&k| k == part.side_one)
        .expect("side one is among the modes");
    let nu_min = reduced
        .partial_transpose(pos)?
        .symplectic_eigenvalues()?
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    Ok((-(2.0 * nu_min).ln()).max(0.0))
}

/// Logarithmic negativity of a `1|1` or `1|2` partition.
pub fn log_negativity(v: &CovarianceMatrix, part: &ModePartition) -> Result<f64, GaussianError> {
    v.check_physical()?;
    log_negativity_unchecked(v, part)
}

/// Contangle: squared logarithmic negativity.
pub fn contangle(v: &CovarianceMatrix, part: &ModePartition) -> Result<f64, GaussianError> {
    Ok(log_negativity(v, part)?.powi(2))
}

fn others(focus: usize) -> (usize, usize) {
    match focus {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}

fn residual_unchecked(v: &CovarianceMatrix, focus: usize) -> Result<f64, GaussianError> {
    let (j, k) = others(focus);
    let c = |p: ModePartition| log_negativity_unchecked(v, &p).map(|e| e * e);
    Ok(c(ModePartition::new(focus, &[j, k])?)?
        - c(ModePartition::pair(focus, j)?)?
        - c(ModePartition::pair(focus, k)?)?)
}

fn require_three_modes(v: &CovarianceMatrix) -> Result<(), GaussianError> {
    if v.n_modes() != 3 {
        return Err(GaussianError::Domain(format!(
            "residual contangle needs exactly 3 modes, got {}",
            v.n_modes()
        )));
    }
    Ok(())
}

/// Raw residual contangle `C_{i|jk} − C_{i|j} − C_{i|k}` for focus mode `i`.
pub fn residual_contangle(v: &CovarianceMatrix, focus: usize) -> Result<f64, GaussianError> {
    require_three_modes(v)?;
    if focus >= 3 {
        return Err(GaussianError::Domain(format!("focus mode {focus} out of range")));
    }
    v.check_physical()?;
    residual_unchecked(v, focus)
}

/// Bipartite and tripartite entanglement of a three-mode state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TripartiteEntanglement {
    /// E_N of the pairs (0,1), (1,2), (0,2): for the steady state a|m, m|b, a|b.
    pub e_01: f64,
    pub e_12: f64,
    pub e_02: f64,
    /// Raw residual contangles with focus 0, 1, 2.
    pub residuals: [f64; 3],
    /// Minimum residual contangle. Values within the numerical floor below
    /// zero are clamped to zero; a larger violation is kept as is.
    pub r_min: f64,
    /// Some residual lies below `-floor`.
    pub monogamy_violated: bool,
    pub genuine: bool,
}

/// Minimum residual contangle; values within `floor` below zero are clamped
/// to zero, anything more negative is returned unchanged.
pub fn min_residual_contangle(v: &CovarianceMatrix) -> Result<f64, GaussianError> {
    Ok(tripartite_entanglement(v, MONOGAMY_FLOOR, TRIPARTITE_THRESHOLD)?.r_min)
}

/// Full bipartite/tripartite analysis. Physicality is checked once.
pub fn tripartite_entanglement(
    v: &CovarianceMatrix,
    floor: f64,
    threshold: f64,
) -> Result<TripartiteEntanglement, GaussianError> {
    require_three_modes(v)?;
    v.check_physical()?;
    let e = |i, j| log_negativity_unchecked(v, &ModePartition::pair(i, j)?);
    let (e_01, e_12, e_02) = (e(0, 1)?, e(1, 2)?, e(0, 2)?);
    let c_pair = |i: usize, j: usize| -> f64 {
        let x = match (i.min(j), i.max(j)) {
            (0, 1) => e_01,
            (1, 2) => e_12,
            _ => e_02,
        };
        x * x
    };
    let mut residuals = [0.0; 3];
    for (focus, r) in residuals.iter_mut().enumerate() {
        let (j, k) = others(focus);
        let one_vs_two = log_negativity_unchecked(v, &ModePartition::new(focus, &[j, k])?)?;
        *r = one_vs_two * one_vs_two - c_pair(focus, j) - c_pair(focus, k);
    }
    let raw_min = residuals.iter().copied().fold(f64::INFINITY, f64::min);
    let monogamy_violated = raw_min < -floor;
    let r_min = if monogamy_violated { raw_min } else { raw_min.max(0.0) };
    Ok(TripartiteEntanglement {
        e_01,
        e_12,
        e_02,
        residuals,
        r_min,
        monogamy_violated,
        genuine: r_min > threshold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::states;

    #[test]
    fn partition_validation() {
        assert!(ModePartition::new(0, &[]).is_err());
        assert!(ModePartition::new(0, &[0]).is_err());
        assert!(ModePartition::new(0, &[1, 1]).is_err());
        assert!(ModePartition::new(0, &[1, 2, 3]).is_err());
        assert!(ModePartition::new(2, &[0, 1]).is_ok());
    }

    #[test]
    fn vacuum_has_no_entanglement() {
        let v = states::vacuum(2);
        assert_eq!(log_negativity(&v, &ModePartition::pair(0, 1).unwrap()).unwrap(), 0.0);
        let v3 = states::vacuum(3);
        assert_eq!(min_residual_contangle(&v3).unwrap(), 0.0);
        for f in 0..3 {
            assert_eq!(residual_contangle(&v3, f).unwrap(), 0.0);
        }
    }

    #[test]
    fn tmsv_closed_form() {
        let v = states::two_mode_squeezed_vacuum(1.0);
        let part = ModePartition::pair(0, 1).unwrap();
        assert!((log_negativity(&v, &part).unwrap() - 2.0).abs() < 1e-10);
        assert!((contangle(&v, &part).unwrap() - 4.0).abs() < 1e-9);
        // Symmetric in which side is transposed.
        let rev = ModePartition::pair(1, 0).unwrap();
        assert!((log_negativity(&v, &rev).unwrap() - 2.0).abs() < 1e-10);
    }

    #[test]
    fn residual_needs_three_modes() {
        let v = states::two_mode_squeezed_vacuum(0.5);
        assert!(residual_contangle(&v, 0).is_err());
        assert!(min_residual_contangle(&v).is_err());
    }

    #[test]
    fn unphysical_input_rejected() {
        let v = states::two_mode_squeezed_vacuum(0.5).partial_transpose(0).unwrap();
        assert!(matches!(
            log_negativity(&v, &ModePartition::pair(0, 1).unwrap()),
            Err(GaussianError::Unphysical { .. })
        ));
    }
}
