//! Physical constants (CODATA 2018 exact values) and YIG material defaults.

use std::f64::consts::PI;

pub const TWO_PI: f64 = 2.0 * PI;

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;

/// Boltzmann constant, J/K.
pub const K_B: f64 = 1.380_649e-23;

/// Spin density of YIG, 1/m³.
pub const YIG_SPIN_DENSITY: f64 = 4.22e27;

/// Gyromagnetic ratio γ = 2π·28 GHz/T, in rad/s/T.
pub const GYROMAGNETIC_RATIO: f64 = TWO_PI * 28e9;

/// Spin number of the ground-state Fe³⁺ ion.
pub const FE3_SPIN: f64 = 2.5;

/// Kerr coefficient of a 1 mm YIG sphere, rad/s (K/2π = 1e-10 Hz).
pub const KERR_1MM: f64 = TWO_PI * 1e-10;

/// Reference diameter for [`KERR_1MM`], m.
pub const KERR_REFERENCE_DIAMETER: f64 = 1e-3;

/// Converts an ordinary frequency in Hz to angular frequency in rad/s.
#[inline]
pub fn hz(f: f64) -> f64 {
    TWO_PI * f
}
