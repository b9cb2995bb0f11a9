use serde::{Deserialize, Serialize};

use super::constants::{hz, FE3_SPIN, GYROMAGNETIC_RATIO, KERR_1MM, YIG_SPIN_DENSITY};
use super::ModelError;

/// Smallest mechanical quality factor ω_b/γ_b accepted. Below this the
/// Markovian treatment of the mechanical bath is not trusted.
pub const MIN_MECHANICAL_Q: f64 = 100.0;

/// Physical inputs of the three-mode system. All rates and frequencies are
/// angular (rad/s); temperature is in kelvin.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    pub omega_a: f64,
    pub omega_b: f64,
    /// Cavity-drive detuning ω_a − ω₀.
    pub delta_a: f64,
    /// Effective magnon-drive detuning including the magnetostrictive shift.
    pub delta_m_eff: f64,
    pub kappa_a: f64,
    pub kappa_m: f64,
    pub gamma_b: f64,
    pub g_ma: f64,
    pub temperature: f64,
    pub coupling: Coupling,
}

/// How the effective magnomechanical coupling is specified.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum Coupling {
    /// |G_mb| given directly, rad/s.
    Direct { g_mb_eff: f64 },
    /// G_mb derived from the drive field and the sphere.
    Physical(PhysicalDrive),
}

/// Drive field, single-magnon coupling and sphere geometry.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhysicalDrive {
    /// Drive field amplitude B₀, T.
    pub b0: f64,
    /// Single-magnon magnomechanical coupling, rad/s.
    pub g_mb: f64,
    /// Sphere diameter, m.
    pub sphere_diameter: f64,
    /// Spin density, 1/m³.
    pub spin_density: f64,
    /// Gyromagnetic ratio, rad/s/T.
    pub gyromagnetic_ratio: f64,
    pub spin_s: f64,
    /// Kerr coefficient of a 1 mm sphere, rad/s.
    pub kerr_1mm: f64,
}

impl PhysicalDrive {
    /// 250 µm YIG sphere driven at B₀ = 3.9e-5 T with g_mb/2π = 0.2 Hz.
    pub fn fig2() -> Self {
        Self {
            b0: 3.9e-5,
            g_mb: hz(0.2),
            sphere_diameter: 250e-6,
            spin_density: YIG_SPIN_DENSITY,
            gyromagnetic_ratio: GYROMAGNETIC_RATIO,
            spin_s: FE3_SPIN,
            kerr_1mm: KERR_1MM,
        }
    }
}

impl SystemParams {
    /// Base parameter set of the detuning maps: ω_a/2π = 10 GHz,
    /// ω_b/2π = 10 MHz, γ_b/2π = 100 Hz, κ_a/2π = κ_m/2π = 1 MHz,
    /// g_ma/2π = G_mb/2π = 3.2 MHz, T = 10 mK, with Δ_a = −ω_b and
    /// Δ̃_m = 0.9 ω_b.
    pub fn fig2() -> Self {
        let omega_b = hz(10e6);
        Self {
            omega_a: hz(10e9),
            omega_b,
            delta_a: -omega_b,
            delta_m_eff: 0.9 * omega_b,
            kappa_a: hz(1e6),
            kappa_m: hz(1e6),
            gamma_b: hz(100.0),
            g_ma: hz(3.2e6),
            temperature: 0.01,
            coupling: Coupling::Direct {
                g_mb_eff: hz(3.2e6),
            },
        }
    }

    /// As [`SystemParams::fig2`] with G_mb/2π = 4.8 MHz.
    pub fn fig3() -> Self {
        Self {
            coupling: Coupling::Direct {
                g_mb_eff: hz(4.8e6),
            },
            ..Self::fig2()
        }
    }

    /// As [`SystemParams::fig3`] with κ_a/2π = 3 MHz and κ_m = κ_a/5.
    pub fn fig4() -> Self {
        Self {
            kappa_a: hz(3e6),
            kappa_m: hz(3e6) / 5.0,
            ..Self::fig3()
        }
    }

    pub fn with_delta_a(mut self, delta_a: f64) -> Self {
        self.delta_a = delta_a;
        self
    }

    pub fn with_temperature(mut self, t: f64) -> Self {
        self.temperature = t;
        self
    }

    pub fn physical_drive(&self) -> Option<&PhysicalDrive> {
        match &self.coupling {
            Coupling::Physical(d) => Some(d),
            Coupling::Direct { .. } => None,
        }
    }

    /// Checks every field invariant, naming the first offending field.
    pub fn validate(&self) -> Result<(), ModelError> {
        fn positive(field: &'static str, v: f64) -> Result<(), ModelError> {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(ModelError::InvalidParameter {
                    field,
                    reason: format!("must be a positive finite number, got {v}"),
                })
            }
        }
        fn non_negative(field: &'static str, v: f64) -> Result<(), ModelError> {
            if v.is_finite() && v >= 0.0 {
                Ok(())
            } else {
                Err(ModelError::InvalidParameter {
                    field,
                    reason: format!("must be a non-negative finite number, got {v}"),
                })
            }
        }
        fn finite(field: &'static str, v: f64) -> Result<(), ModelError> {
            if v.is_finite() {
                Ok(())
            } else {
                Err(ModelError::InvalidParameter {
                    field,
                    reason: format!("must be finite, got {v}"),
                })
            }
        }

        positive("omega_a", self.omega_a)?;
        positive("omega_b", self.omega_b)?;
        finite("delta_a", self.delta_a)?;
        finite("delta_m_eff", self.delta_m_eff)?;
        positive("kappa_a", self.kappa_a)?;
        positive("kappa_m", self.kappa_m)?;
        positive("gamma_b", self.gamma_b)?;
        positive("g_ma", self.g_ma)?;
        non_negative("temperature", self.temperature)?;
        let q = self.omega_b / self.gamma_b;
        if q <= MIN_MECHANICAL_Q {
            return Err(ModelError::InvalidParameter {
                field: "gamma_b",
                reason: format!(
                    "mechanical quality factor omega_b/gamma_b = {q:.3e} must exceed {MIN_MECHANICAL_Q}"
                ),
            });
        }
        match &self.coupling {
            Coupling::Direct { g_mb_eff } => non_negative("g_mb_eff", *g_mb_eff)?,
            Coupling::Physical(d) => {
                non_negative("b0", d.b0)?;
                non_negative("g_mb", d.g_mb)?;
                positive("sphere_diameter", d.sphere_diameter)?;
                positive("spin_density", d.spin_density)?;
                positive("gyromagnetic_ratio", d.gyromagnetic_ratio)?;
                positive("spin_s", d.spin_s)?;
                non_negative("kerr_1mm", d.kerr_1mm)?;
            }
        }
        Ok(())
    }
}

impl Default for SystemParams {
    fn default() -> Self {
        Self::fig2()
    }
}
