use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::constants::KERR_REFERENCE_DIAMETER;
use super::{DerivedState, ModelError, PhysicalDrive, SystemParams};

/// Pass thresholds for the two linearization checks.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidityThresholds {
    /// Upper bound on ⟨m†m⟩ / (2Ns).
    pub low_excitation: f64,
    /// Upper bound on K|⟨m⟩|³ / Ω.
    pub kerr: f64,
}

impl Default for ValidityThresholds {
    fn default() -> Self {
        Self {
            low_excitation: 0.01,
            kerr: 0.25,
        }
    }
}

/// Low-excitation and Kerr-negligibility checks of the linearized model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidityReport {
    /// ⟨m†m⟩ ≈ |⟨m⟩|².
    pub magnon_occupation: f64,
    /// 2Ns, the number of available spin flips.
    pub excitation_capacity: f64,
    pub low_excitation_ratio: f64,
    pub low_excitation_ok: bool,
    /// Kerr coefficient of this sphere, rad/s.
    pub kerr_coefficient: f64,
    /// K|⟨m⟩|³, rad/s.
    pub kerr_term: f64,
    /// K|⟨m⟩|³ / Ω; `None` without drive.
    pub kerr_ratio: Option<f64>,
    pub kerr_ok: bool,
    pub no_drive: bool,
    pub thresholds: ValidityThresholds,
}

impl ValidityReport {
    pub fn passed(&self) -> bool {
        self.low_excitation_ok && self.kerr_ok
    }
}

/// Kerr coefficient scaled from the 1 mm reference by inverse volume.
pub fn kerr_coefficient(drive: &PhysicalDrive) -> f64 {
    drive.kerr_1mm * (KERR_REFERENCE_DIAMETER / drive.sphere_diameter).powi(3)
}

pub(crate) fn report_from_parts(
    drive: &PhysicalDrive,
    n_spins: f64,
    rabi_omega: f64,
    m_mean: Complex64,
    thresholds: ValidityThresholds,
) -> ValidityReport {
    let occupation = m_mean.norm_sqr();
    let capacity = 2.0 * n_spins * drive.spin_s;
    let low_excitation_ratio = occupation / capacity;
    let kerr = kerr_coefficient(drive);
    let kerr_term = kerr * m_mean.norm().powi(3);
    let no_drive = rabi_omega == 0.0;
    let kerr_ratio = (!no_drive).then(|| kerr_term / rabi_omega);
    ValidityReport {
        magnon_occupation: occupation,
        excitation_capacity: capacity,
        low_excitation_ratio,
        low_excitation_ok: low_excitation_ratio < thresholds.low_excitation,
        kerr_coefficient: kerr,
        kerr_term,
        kerr_ratio,
        kerr_ok: kerr_ratio.is_none_or(|r| r < thresholds.kerr),
        no_drive,
        thresholds,
    }
}

/// Validity report for a physical-drive configuration.
pub fn validity_report(
    p: &SystemParams,
    derived: &DerivedState,
    thresholds: ValidityThresholds,
) -> Result<ValidityReport, ModelError> {
    let drive = p.physical_drive().ok_or_else(|| {
        ModelError::NotApplicable("validity checks need the physical coupling mode".into())
    })?;
    match (derived.n_spins, derived.rabi_omega, derived.m_mean) {
        (Some(n), Some(rabi), Some(m)) => Ok(report_from_parts(drive, n, rabi, m, thresholds)),
        _ => Err(ModelError::NotApplicable(
            "derived state lacks the drive quantities".into(),
        )),
    }
}
