use magnomech::model::constants::{hz, TWO_PI};
use magnomech::model::{
    derive, diffusion_matrix, drift_matrix, effective_coupling, magnon_amplitude_approx,
    magnon_amplitude_exact, rabi_frequency, spin_count, thermal_occupation, validity_report,
    ValidityThresholds,
};
use magnomech::{Coupling, PhysicalDrive, RealMatrix, SystemParams};
use num_complex::Complex64;
use proptest::prelude::*;

fn physical(drive: PhysicalDrive) -> SystemParams {
    SystemParams {
        coupling: Coupling::Physical(drive),
        ..SystemParams::fig2()
    }
}

fn rel(x: f64, target: f64) -> f64 {
    (x - target).abs() / target.abs()
}

#[test]
fn physical_mode_worked_numbers() {
    let p = physical(PhysicalDrive::fig2());
    let d = derive(&p).unwrap();
    let n = d.n_spins.unwrap();
    let m = d.m_mean.unwrap().norm();
    assert!(rel(n, 3.45e16) < 0.01, "N = {n:e}");
    assert!(rel(d.rabi_omega.unwrap(), 7.17e14) < 0.01);
    assert!(rel(m, 1.13e7) < 0.02, "|m| = {m:e}");
    assert!(rel(d.g_mb_eff / TWO_PI, 3.19e6) < 0.01);
    let v = d.validity.unwrap();
    assert!(rel(v.kerr_coefficient / TWO_PI, 6.4e-9) < 0.01);
    assert!(v.low_excitation_ratio < 1e-3 && v.low_excitation_ok);
    let r2 = v.kerr_ratio.unwrap();
    assert!(r2 > 0.07 && r2 < 0.09 && v.kerr_ok);
    assert!(d.q_mean.unwrap() < 0.0);
}

#[test]
fn kerr_check_fails_for_hundredfold_field() {
    let mut drive = PhysicalDrive::fig2();
    drive.b0 *= 100.0;
    let p = physical(drive);
    let d = derive(&p).unwrap();
    let v = validity_report(&p, &d, ValidityThresholds::default()).unwrap();
    assert!(!v.kerr_ok);
    assert!(!v.passed());
}

#[test]
fn weaker_single_magnon_coupling_keeps_larger_drive_valid() {
    let mut drive = PhysicalDrive::fig2();
    drive.g_mb = hz(0.3);
    let d = derive(&physical(drive)).unwrap();
    assert!(d.validity.unwrap().passed());
    assert!(rel(d.g_mb_eff / TWO_PI, 4.8e6) < 0.01);
}

#[test]
fn mechanical_occupation_at_ten_millikelvin() {
    let n = thermal_occupation(hz(10e6), 0.01).unwrap();
    assert!((n - 20.34).abs() < 0.01, "n = {n}");
}

#[test]
fn unscaled_drift_is_affine_in_each_rate() {
    type Setter = fn(&mut SystemParams, f64);
    let setters: [(&str, Setter); 8] = [
        ("delta_a", |p, x| p.delta_a = x),
        ("delta_m_eff", |p, x| p.delta_m_eff = x),
        ("g_ma", |p, x| p.g_ma = x),
        ("kappa_a", |p, x| p.kappa_a = x),
        ("kappa_m", |p, x| p.kappa_m = x),
        ("gamma_b", |p, x| p.gamma_b = x),
        ("omega_b", |p, x| p.omega_b = x),
        ("g_mb", |_, _| {}),
    ];
    let unscaled = |p: &SystemParams, g: f64| drift_matrix(p, g).scale(p.omega_b);
    let g0 = hz(3.2e6);
    for (name, set) in setters {
        let at = |x: f64| {
            let mut p = SystemParams::fig2();
            if name == "g_mb" {
                return unscaled(&p, x);
            }
            set(&mut p, x);
            unscaled(&p, g0)
        };
        let (x1, x2) = (hz(2e6), hz(8e6));
        let mid = at(0.5 * (x1 + x2));
        let avg = at(x1).add(&at(x2)).unwrap().scale(0.5);
        let err = mid.sub(&avg).unwrap().max_abs();
        assert!(err <= 1e-9 * mid.max_abs(), "{name}: {err:e}");
    }
}

#[test]
fn diffusion_is_diagonal_psd_with_zero_position_entry() {
    for t in [0.0, 0.01, 0.1, 1.0] {
        let p = SystemParams::fig2().with_temperature(t);
        let d = diffusion_matrix(&p, &derive(&p).unwrap());
        let diag = d.diagonal();
        assert_eq!(diag[4], 0.0);
        assert!(diag.iter().all(|&x| x >= 0.0));
        assert_eq!(d.sub(&RealMatrix::from_diag(&diag)).unwrap().max_abs(), 0.0);
    }
}

proptest! {
    #[test]
    fn large_detuning_amplitudes_converge(
        ka in 0.1f64..1.0,
        km in 0.1f64..1.0,
        da in 100.0f64..1000.0,
        dm in 100.0f64..1000.0,
        sa in prop::bool::ANY,
        sm in prop::bool::ANY,
        g in 0.0f64..10.0,
    ) {
        let unit = hz(1e6);
        let p = SystemParams {
            kappa_a: ka * unit,
            kappa_m: km * unit,
            delta_a: if sa { da } else { -da } * unit,
            delta_m_eff: if sm { dm } else { -dm } * unit,
            g_ma: g * unit,
            ..SystemParams::fig2()
        };
        let exact = magnon_amplitude_exact(&p, 1e14).unwrap();
        let approx = magnon_amplitude_approx(&p, 1e14).unwrap();
        let diff = (exact - approx).norm() / approx.norm();
        let bound = 10.0 * ka.max(km) / da.min(dm);
        prop_assert!(diff < bound, "{diff:e} vs {bound:e}");
    }

    #[test]
    fn occupation_monotone(w in 1e6f64..1e11, t in 1e-3f64..2.0, f in 1.01f64..3.0) {
        let n = thermal_occupation(w, t).unwrap();
        prop_assert!(thermal_occupation(w, t * f).unwrap() > n);
        prop_assert!(thermal_occupation(w * f, t).unwrap() < n);
    }

    #[test]
    fn validity_ratios_grow_with_field(b0 in 1e-6f64..1e-3, f in 1.01f64..5.0) {
        let ratios = |b0: f64| {
            let mut drive = PhysicalDrive::fig2();
            drive.b0 = b0;
            let p = physical(drive);
            let d = derive(&p).unwrap();
            let v = validity_report(&p, &d, ValidityThresholds::default()).unwrap();
            (v.low_excitation_ratio, v.kerr_ratio.unwrap())
        };
        let (r1, r2) = ratios(b0);
        let (s1, s2) = ratios(b0 * f);
        prop_assert!(s1 > r1 && s2 > r2);
    }

    #[test]
    fn effective_coupling_is_linear(g in 0.0f64..10.0, re in -1e7f64..1e7, im in -1e7f64..1e7, k in 0.0f64..4.0) {
        let m = Complex64::new(re, im);
        let base = effective_coupling(g, m);
        let tol = 1e-12 * base.abs().max(1e-300);
        prop_assert!((effective_coupling(k * g, m) - k * base).abs() <= tol * k.max(1.0));
        prop_assert!((effective_coupling(g, m * k) - k * base).abs() <= tol * k.max(1.0));
    }

    #[test]
    fn rabi_frequency_scales_with_sqrt_spin_count(d in 1e-5f64..1e-3, b0 in 0.0f64..1e-3) {
        let n = spin_count(d, 4.22e27).unwrap();
        let o1 = rabi_frequency(b0, n, hz(28e9)).unwrap();
        let o4 = rabi_frequency(b0, 4.0 * n, hz(28e9)).unwrap();
        prop_assert!((o4 - 2.0 * o1).abs() <= 1e-12 * o4.max(1e-300));
    }
}
