use serde::{Deserialize, Serialize};

use crate::gaussian::{tripartite_entanglement, CovarianceMatrix};
use crate::linalg::{lyapunov_relative_residual, lyapunov_solve, RealMatrix};
use crate::model::{
    derive, diffusion_matrix, drift_matrix, stability_check_with_margin, validity_report,
    DerivedState, StabilityVerdict, SystemParams, ValidityReport,
};

use super::{Measure, SweepError, Tolerances};

/// Everything computed on the way to the steady-state covariance matrix.
#[derive(Clone, Debug)]
pub struct SteadyState {
    pub derived: DerivedState,
    pub validity: Option<ValidityReport>,
    /// Drift matrix, units of ω_b.
    pub drift: RealMatrix,
    /// Diffusion matrix, units of ω_b.
    pub diffusion: RealMatrix,
    pub stability: StabilityVerdict,
    /// Present iff the drift matrix is stable.
    pub covariance: Option<CovarianceMatrix>,
    /// Relative Lyapunov residual of `covariance`.
    pub lyapunov_residual: Option<f64>,
}

/// Builds A and D, checks stability and solves for the covariance matrix.
pub fn steady_state(p: &SystemParams, tol: &Tolerances) -> Result<SteadyState, SweepError> {
    let derived = derive(p)?;
    let validity = match p.physical_drive() {
        Some(_) => Some(validity_report(p, &derived, tol.validity())?),
        None => None,
    };
    let drift = drift_matrix(p, derived.g_mb_eff);
    let diffusion = diffusion_matrix(p, &derived);
    let stability = stability_check_with_margin(&drift, tol.stability_margin)?;
    let (covariance, lyapunov_residual) = if stability.stable {
        let v = lyapunov_solve(&drift, &diffusion)?;
        let res = lyapunov_relative_residual(&drift, &v, &diffusion);
        (Some(CovarianceMatrix::three_mode(v)?), Some(res))
    } else {
        (None, None)
    };
    Ok(SteadyState {
        derived,
        validity,
        drift,
        diffusion,
        stability,
        covariance,
        lyapunov_residual,
    })
}

/// Entanglement of one stable steady state.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Measures {
    pub e_am: f64,
    pub e_mb: f64,
    pub e_ab: f64,
    /// Raw residual contangles R^{a|mb}, R^{m|ab}, R^{b|am}.
    pub residuals: [f64; 3],
    pub r_min: f64,
    /// A residual lies below the monogamy floor; `r_min` is then negative.
    pub monogamy_violated: bool,
    pub genuine: bool,
}

impl Measures {
    pub fn get(&self, m: Measure) -> f64 {
        match m {
            Measure::EAm => self.e_am,
            Measure::EMb => self.e_mb,
            Measure::EAb => self.e_ab,
            Measure::RMin => self.r_min,
        }
    }
}

/// Computes all bipartite and tripartite measures of a steady state.
pub fn measures(v: &CovarianceMatrix, tol: &Tolerances) -> Result<Measures, SweepError> {
    let t = tripartite_entanglement(v, tol.monogamy_floor, tol.tripartite_threshold)?;
    Ok(Measures {
        e_am: t.e_01,
        e_mb: t.e_12,
        e_ab: t.e_02,
        residuals: t.residuals,
        r_min: t.r_min,
        monogamy_violated: t.monogamy_violated,
        genuine: t.genuine,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidityFlags {
    pub low_excitation_ok: bool,
    pub kerr_ok: bool,
}

/// One evaluated grid point. Measures are present iff the point is stable
/// and the evaluation succeeded; failures are recorded in `error`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointResult {
    pub stable: bool,
    pub max_real_eig: Option<f64>,
    pub measures: Option<Measures>,
    pub lyapunov_residual: Option<f64>,
    pub validity: Option<ValidityFlags>,
    pub error: Option<String>,
}

impl PointResult {
    fn failed(err: &SweepError, stable: bool, max_real_eig: Option<f64>) -> Self {
        Self {
            stable,
            max_real_eig,
            measures: None,
            lyapunov_residual: None,
            validity: None,
            error: Some(err.to_string()),
        }
    }

    pub fn measure(&self, m: Measure) -> Option<f64> {
        self.measures.as_ref().map(|x| x.get(m))
    }
}

/// Runs the full pipeline at one parameter point. Errors are captured in the
/// result rather than returned.
pub fn evaluate_point(p: &SystemParams, tol: &Tolerances) -> PointResult {
    let ss = match steady_state(p, tol) {
        Ok(ss) => ss,
        Err(e) => return PointResult::failed(&e, false, None),
    };
    let max_eig = Some(ss.stability.max_real_part);
    let validity = ss.validity.as_ref().map(|r| ValidityFlags {
        low_excitation_ok: r.low_excitation_ok,
        kerr_ok: r.kerr_ok,
    });
    let Some(cm) = ss.covariance.as_ref() else {
        return PointResult {
            stable: false,
            max_real_eig: max_eig,
            measures: None,
            lyapunov_residual: None,
            validity,
            error: None,
        };
    };
    match measures(cm, tol) {
        Ok(m) => PointResult {
            stable: true,
            max_real_eig: max_eig,
            measures: Some(m),
            lyapunov_residual: ss.lyapunov_residual,
            validity,
            error: None,
        },
        Err(e) => PointResult {
            lyapunov_residual: ss.lyapunov_residual,
            validity,
            ..PointResult::failed(&e, true, max_eig)
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::constants::hz;
    use crate::model::Coupling;

    #[test]
    fn fig2_point_has_all_bipartite_entanglement() {
        let r = evaluate_point(&SystemParams::fig2(), &Tolerances::default());
        assert!(r.stable, "{r:?}");
        let m = r.measures.unwrap();
        assert!(m.e_am > 0.0 && m.e_mb > 0.0 && m.e_ab > 0.0, "{m:?}");
        assert!(r.lyapunov_residual.unwrap() < 1e-9);
    }

    #[test]
    fn no_magnomechanical_coupling_no_cavity_magnon_entanglement() {
        let mut p = SystemParams::fig2();
        p.coupling = Coupling::Direct { g_mb_eff: 0.0 };
        let r = evaluate_point(&p, &Tolerances::default());
        assert!(r.stable);
        let m = r.measures.unwrap();
        assert!(m.e_am <= 1e-9);
        assert!(m.r_min <= 1e-9);
    }

    #[test]
    fn strong_blue_detuned_coupling_is_unstable() {
        let mut p = SystemParams::fig2();
        p.delta_a = p.omega_b;
        p.delta_m_eff = -p.omega_b;
        p.coupling = Coupling::Direct {
            g_mb_eff: hz(30e6),
        };
        let r = evaluate_point(&p, &Tolerances::default());
        assert!(!r.stable);
        assert!(r.measures.is_none());
        assert!(r.max_real_eig.unwrap() > 0.0);
        assert!(r.error.is_none());
    }

    #[test]
    fn invalid_params_are_recorded_not_raised() {
        let mut p = SystemParams::fig2();
        p.kappa_a = -1.0;
        let r = evaluate_point(&p, &Tolerances::default());
        assert!(!r.stable);
        assert!(r.error.unwrap().contains("kappa_a"));
    }
}
