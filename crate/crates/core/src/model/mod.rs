//! From physical parameters to the linearized fluctuation dynamics.
//!
//! The fluctuation vector is ordered `(δX, δY, δx, δy, δq, δp)`: cavity
//! quadratures, magnon quadratures, mechanical position and momentum. Drift
//! and diffusion matrices are returned in units of ω_b, so a rate `r`
//! appears as `r / ω_b`.

pub mod constants;
mod params;
mod validity;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{eigenvalues_general, LinalgError, RealMatrix};

pub use params::{Coupling, PhysicalDrive, SystemParams, MIN_MECHANICAL_Q};
pub use validity::{kerr_coefficient, validity_report, ValidityReport, ValidityThresholds};

use constants::{HBAR, K_B};

/// Stability requires every eigenvalue of the scaled drift matrix to have
/// real part below `-STABILITY_MARGIN`.
pub const STABILITY_MARGIN: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("degenerate parameters: {0}")]
    Degenerate(String),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Quantities computed from [`SystemParams`]. Drive-related fields are only
/// present in the physical coupling mode.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DerivedState {
    pub rabi_omega: Option<f64>,
    pub n_spins: Option<f64>,
    pub m_mean: Option<Complex64>,
    pub q_mean: Option<f64>,
    /// |G_mb|, rad/s.
    pub g_mb_eff: f64,
    pub n_therm_a: f64,
    pub n_therm_m: f64,
    pub n_therm_b: f64,
    pub magnon_occupation: Option<f64>,
    pub validity: Option<ValidityReport>,
}

/// Ω = (√5/4)·γ·√N·B₀ in rad/s.
pub fn rabi_frequency(b0: f64, n_spins: f64, gyromagnetic_ratio: f64) -> Result<f64, ModelError> {
    if !(b0 >= 0.0 && b0.is_finite()) {
        return Err(ModelError::Domain(format!(
            "drive amplitude must be non-negative, got {b0}"
        )));
    }
    if !(n_spins > 0.0 && gyromagnetic_ratio > 0.0) {
        return Err(ModelError::Domain(format!(
            "spin count and gyromagnetic ratio must be positive, got {n_spins} and {gyromagnetic_ratio}"
        )));
    }
    Ok(5f64.sqrt() / 4.0 * gyromagnetic_ratio * n_spins.sqrt() * b0)
}

/// N = ρ·V for a sphere of the given diameter.
pub fn spin_count(sphere_diameter: f64, spin_density: f64) -> Result<f64, ModelError> {
    if !(sphere_diameter >= 0.0 && spin_density >= 0.0) {
        return Err(ModelError::Domain(format!(
            "sphere diameter and spin density must be non-negative, got {sphere_diameter} and {spin_density}"
        )));
    }
    Ok(spin_density * std::f64::consts::PI / 6.0 * sphere_diameter.powi(3))
}

/// Steady-state magnon amplitude
/// ⟨m⟩ = Ω(iΔ_a + κ_a) / [g_ma² + (iΔ̃_m + κ_m)(iΔ_a + κ_a)].
///
/// Δ̃_m is taken as given, which removes the self-consistency through the
/// magnetostrictive frequency shift.
pub fn magnon_amplitude_exact(p: &SystemParams, rabi_omega: f64) -> Result<Complex64, ModelError> {
    let cav = Complex64::new(p.kappa_a, p.delta_a);
    let mag = Complex64::new(p.kappa_m, p.delta_m_eff);
    let g2 = p.g_ma * p.g_ma;
    let den = g2 + mag * cav;
    if den.norm() <= 1e-14 * (g2 + mag.norm() * cav.norm()) {
        return Err(ModelError::Degenerate(
            "g_ma^2 + (i delta_m_eff + kappa_m)(i delta_a + kappa_a) vanishes".into(),
        ));
    }
    Ok(rabi_omega * cav / den)
}

/// Large-detuning form ⟨m⟩ ≈ iΩΔ_a / (g_ma² − Δ̃_m Δ_a), purely imaginary.
pub fn magnon_amplitude_approx(
    p: &SystemParams,
    rabi_omega: f64,
) -> Result<Complex64, ModelError> {
    let g2 = p.g_ma * p.g_ma;
    let prod = p.delta_m_eff * p.delta_a;
    let den = g2 - prod;
    if den.abs() <= 1e-14 * (g2 + prod.abs()) {
        return Err(ModelError::Degenerate(
            "g_ma^2 = delta_m_eff * delta_a (resonant denominator)".into(),
        ));
    }
    Ok(Complex64::new(0.0, rabi_omega * p.delta_a / den))
}

/// |G_mb| = √2·g_mb·|⟨m⟩|. The phase of G_mb is a local quadrature rotation of
/// the magnon mode and does not affect any entanglement measure.
pub fn effective_coupling(g_mb: f64, m_mean: Complex64) -> f64 {
    std::f64::consts::SQRT_2 * g_mb * m_mean.norm()
}

/// Bose-Einstein occupation [exp(ħω/k_B T) − 1]⁻¹; zero at T = 0.
pub fn thermal_occupation(omega: f64, temperature: f64) -> Result<f64, ModelError> {
    if !(omega > 0.0) {
        return Err(ModelError::Domain(format!(
            "mode frequency must be positive, got {omega}"
        )));
    }
    if !(temperature >= 0.0) {
        return Err(ModelError::Domain(format!(
            "temperature must be non-negative, got {temperature}"
        )));
    }
    if temperature == 0.0 {
        return Ok(0.0);
    }
    Ok(1.0 / (HBAR * omega / (K_B * temperature)).exp_m1())
}

/// Computes the derived quantities. In the physical mode this evaluates the
/// spin count, Rabi frequency, exact ⟨m⟩, ⟨q⟩, |G_mb| and the validity
/// report (default thresholds).
pub fn derive(p: &SystemParams) -> Result<DerivedState, ModelError> {
    p.validate()?;
    let n_therm_a = thermal_occupation(p.omega_a, p.temperature)?;
    // Magnon taken at the cavity frequency.
    let n_therm_m = n_therm_a;
    let n_therm_b = thermal_occupation(p.omega_b, p.temperature)?;
    match &p.coupling {
        Coupling::Direct { g_mb_eff } => Ok(DerivedState {
            rabi_omega: None,
            n_spins: None,
            m_mean: None,
            q_mean: None,
            g_mb_eff: *g_mb_eff,
            n_therm_a,
            n_therm_m,
            n_therm_b,
            magnon_occupation: None,
            validity: None,
        }),
        Coupling::Physical(drive) => {
            let n_spins = spin_count(drive.sphere_diameter, drive.spin_density)?;
            let rabi = rabi_frequency(drive.b0, n_spins, drive.gyromagnetic_ratio)?;
            let m = magnon_amplitude_exact(p, rabi)?;
            let q = -(drive.g_mb / p.omega_b) * m.norm_sqr();
            let report = validity::report_from_parts(
                drive,
                n_spins,
                rabi,
                m,
                ValidityThresholds::default(),
            );
            Ok(DerivedState {
                rabi_omega: Some(rabi),
                n_spins: Some(n_spins),
                m_mean: Some(m),
                q_mean: Some(q),
                g_mb_eff: effective_coupling(drive.g_mb, m),
                n_therm_a,
                n_therm_m,
                n_therm_b,
                magnon_occupation: Some(m.norm_sqr()),
                validity: Some(report),
            })
        }
    }
}

/// Drift matrix of the linearized quadrature dynamics, in units of ω_b.
pub fn drift_matrix(p: &SystemParams, g_mb_eff: f64) -> RealMatrix {
    let s = 1.0 / p.omega_b;
    let (ka, km) = (p.kappa_a * s, p.kappa_m * s);
    let (da, dm) = (p.delta_a * s, p.delta_m_eff * s);
    let (g, gm) = (p.g_ma * s, g_mb_eff * s);
    let (wb, gb) = (p.omega_b * s, p.gamma_b * s);
    RealMatrix::from_rows(&[
        [-ka, da, 0.0, g, 0.0, 0.0],
        [-da, -ka, -g, 0.0, 0.0, 0.0],
        [0.0, g, -km, dm, -gm, 0.0],
        [-g, 0.0, -dm, -km, 0.0, 0.0],
        [0.0, 0.0, 0.0, 0.0, 0.0, wb],
        [0.0, 0.0, 0.0, gm, -wb, -gb],
    ])
}

/// Diffusion matrix diag[κ_a(2N_a+1), κ_a(2N_a+1), κ_m(2N_m+1), κ_m(2N_m+1),
/// 0, γ_b(2N_b+1)], in units of ω_b.
pub fn diffusion_matrix(p: &SystemParams, derived: &DerivedState) -> RealMatrix {
    let s = 1.0 / p.omega_b;
    let da = p.kappa_a * s * (2.0 * derived.n_therm_a + 1.0);
    let dm = p.kappa_m * s * (2.0 * derived.n_therm_m + 1.0);
    let db = p.gamma_b * s * (2.0 * derived.n_therm_b + 1.0);
    RealMatrix::from_diag(&[da, da, dm, dm, 0.0, db])
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilityVerdict {
    pub stable: bool,
    /// Largest real part of the drift spectrum (scaled units).
    pub max_real_part: f64,
    pub eigenvalues: Vec<Complex64>,
}

/// Stability with the default margin [`STABILITY_MARGIN`].
pub fn stability_check(a: &RealMatrix) -> Result<StabilityVerdict, ModelError> {
    stability_check_with_margin(a, STABILITY_MARGIN)
}

pub fn stability_check_with_margin(
    a: &RealMatrix,
    margin: f64,
) -> Result<StabilityVerdict, ModelError> {
    let eigenvalues = eigenvalues_general(a)?;
    let max_real_part = eigenvalues
        .iter()
        .map(|z| z.re)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(StabilityVerdict {
        stable: max_real_part < -margin,
        max_real_part,
        eigenvalues,
    })
}
