//! Maximization of an entanglement measure over the cavity detuning.
//!
//! A coarse grid locates the best bracket, then golden-section search refines
//! inside it. Ties go to the smallest Δ_a; an objective that is zero
//! everywhere reports the range midpoint.

use serde::{Deserialize, Serialize};

use crate::model::SystemParams;

use super::evaluate::evaluate_point;
use super::spec::linspace;
use super::{Measure, SweepError, Tolerances};

const GOLDEN_ITERATIONS: usize = 48;

/// Grid maxima at or below this count as an all-zero objective.
pub const ZERO_OBJECTIVE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Optimum {
    /// Best Δ_a, rad/s.
    pub delta_a: f64,
    pub value: f64,
}

fn objective(base: &SystemParams, measure: Measure, tol: &Tolerances, delta_a: f64) -> Option<f64> {
    evaluate_point(&base.clone().with_delta_a(delta_a), tol).measure(measure)
}

/// Grid argmax (first strict maximum) of the stable values.
fn grid_argmax(values: &[Option<f64>]) -> Option<(usize, f64)> {
    let mut best: Option<(usize, f64)> = None;
    for (i, v) in values.iter().enumerate() {
        if let Some(v) = *v {
            if best.is_none_or(|(_, b)| v > b) {
                best = Some((i, v));
            }
        }
    }
    best
}

fn refine(
    f: impl Fn(f64) -> Option<f64>,
    lo: f64,
    hi: f64,
    start: (f64, f64),
) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let score = |x: f64| f(x).unwrap_or(f64::NEG_INFINITY);
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (score(c), score(d));
    let mut best = start;
    let consider = |x: f64, v: f64, best: &mut (f64, f64)| {
        if v > best.1 || (v == best.1 && x < best.0) {
            *best = (x, v);
        }
    };
    consider(c, fc, &mut best);
    consider(d, fd, &mut best);
    for _ in 0..GOLDEN_ITERATIONS {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = score(c);
            consider(c, fc, &mut best);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = score(d);
            consider(d, fd, &mut best);
        }
    }
    best
}

/// Maximizes each measure over Δ_a in `[min, max]`, sharing one coarse grid.
pub fn optimize_measures_over_detuning(
    base: &SystemParams,
    measures: &[Measure],
    range: (f64, f64),
    grid_points: usize,
    tol: &Tolerances,
) -> Vec<Result<Optimum, SweepError>> {
    let (min, max) = range;
    let xs = linspace(min, max, grid_points.max(2));
    let points: Vec<_> = xs
        .iter()
        .map(|&x| evaluate_point(&base.clone().with_delta_a(x), tol))
        .collect();
    measures
        .iter()
        .map(|&m| {
            let values: Vec<Option<f64>> = points.iter().map(|p| p.measure(m)).collect();
            let (i, v) = grid_argmax(&values).ok_or(SweepError::NoStablePoint { min, max })?;
            if v <= ZERO_OBJECTIVE {
                return Ok(Optimum {
                    delta_a: 0.5 * (min + max),
                    value: 0.0,
                });
            }
            let lo = xs[i.saturating_sub(1)];
            let hi = xs[(i + 1).min(xs.len() - 1)];
            let (delta_a, value) = refine(|x| objective(base, m, tol, x), lo, hi, (xs[i], v));
            Ok(Optimum { delta_a, value })
        })
        .collect()
}

/// Maximizes one measure over Δ_a in `[min, max]`.
pub fn optimize_over_detuning(
    base: &SystemParams,
    measure: Measure,
    range: (f64, f64),
    grid_points: usize,
    tol: &Tolerances,
) -> Result<Optimum, SweepError> {
    optimize_measures_over_detuning(base, &[measure], range, grid_points, tol)
        .pop()
        .expect("one measure requested")
}
