use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::gaussian::{MONOGAMY_FLOOR, TRIPARTITE_THRESHOLD};
use crate::model::{Coupling, SystemParams, ValidityThresholds, STABILITY_MARGIN};

use super::SweepError;

/// Default grid resolution per axis.
pub const DEFAULT_POINTS: usize = 101;

/// Default coarse grid of the detuning optimizer.
pub const DEFAULT_SEARCH_POINTS: usize = 401;

/// Numerical thresholds used along the pipeline. Callers may tighten them.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub stability_margin: f64,
    pub monogamy_floor: f64,
    pub tripartite_threshold: f64,
    pub low_excitation: f64,
    pub kerr: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        let v = ValidityThresholds::default();
        Self {
            stability_margin: STABILITY_MARGIN,
            monogamy_floor: MONOGAMY_FLOOR,
            tripartite_threshold: TRIPARTITE_THRESHOLD,
            low_excitation: v.low_excitation,
            kerr: v.kerr,
        }
    }
}

impl Tolerances {
    pub fn validity(&self) -> ValidityThresholds {
        ValidityThresholds {
            low_excitation: self.low_excitation,
            kerr: self.kerr,
        }
    }
}

/// A swept parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    /// Δ_a, rad/s.
    DeltaA,
    /// Δ̃_m, rad/s.
    DeltaMEff,
    /// T, K.
    Temperature,
    /// G_mb / g_ma at fixed g_ma.
    GRatio,
    /// κ_a, rad/s.
    KappaA,
}

impl Axis {
    pub fn name(self) -> &'static str {
        match self {
            Axis::DeltaA => "delta_a",
            Axis::DeltaMEff => "delta_m_eff",
            Axis::Temperature => "temperature",
            Axis::GRatio => "g_ratio",
            Axis::KappaA => "kappa_a",
        }
    }

    /// True for axes carrying an angular frequency.
    pub fn is_frequency(self) -> bool {
        matches!(self, Axis::DeltaA | Axis::DeltaMEff | Axis::KappaA)
    }

    /// Sets this axis on a copy of `base`.
    pub fn apply(self, base: &SystemParams, value: f64) -> SystemParams {
        let mut p = base.clone();
        match self {
            Axis::DeltaA => p.delta_a = value,
            Axis::DeltaMEff => p.delta_m_eff = value,
            Axis::Temperature => p.temperature = value,
            Axis::GRatio => {
                p.coupling = Coupling::Direct {
                    g_mb_eff: value * p.g_ma,
                }
            }
            Axis::KappaA => p.kappa_a = value,
        }
        p
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Axis {
    type Err = SweepError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [
            Axis::DeltaA,
            Axis::DeltaMEff,
            Axis::Temperature,
            Axis::GRatio,
            Axis::KappaA,
        ]
        .into_iter()
        .find(|a| a.name() == s)
        .ok_or_else(|| SweepError::InvalidSpec(format!("unknown axis `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxisSpec {
    pub axis: Axis,
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl AxisSpec {
    pub fn new(axis: Axis, min: f64, max: f64, points: usize) -> Self {
        Self {
            axis,
            min,
            max,
            points,
        }
    }

    /// Evenly spaced values including both end points.
    pub fn values(&self) -> Vec<f64> {
        linspace(self.min, self.max, self.points)
    }
}

pub(crate) fn linspace(min: f64, max: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![min];
    }
    let step = (max - min) / (points - 1) as f64;
    (0..points)
        .map(|i| if i + 1 == points { max } else { min + step * i as f64 })
        .collect()
}

/// A quantity reported per grid point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    EAm,
    EMb,
    EAb,
    RMin,
}

impl Measure {
    pub const ALL: [Measure; 4] = [Measure::EAm, Measure::EMb, Measure::EAb, Measure::RMin];

    pub fn name(self) -> &'static str {
        match self {
            Measure::EAm => "e_am",
            Measure::EMb => "e_mb",
            Measure::EAb => "e_ab",
            Measure::RMin => "r_min",
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Measure {
    type Err = SweepError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Measure::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| SweepError::InvalidSpec(format!("unknown measure `{s}`")))
    }
}

/// Inner maximization over Δ_a performed at every grid point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetuningSearch {
    /// Δ_a range, rad/s.
    pub min: f64,
    pub max: f64,
    pub grid_points: usize,
}

/// A 1- or 2-axis parameter grid over a base parameter set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub name: String,
    pub base: SystemParams,
    pub axes: Vec<AxisSpec>,
    pub outputs: Vec<Measure>,
    pub search: Option<DetuningSearch>,
    pub tolerances: Tolerances,
}

impl SweepSpec {
    pub fn new(name: impl Into<String>, base: SystemParams, axes: Vec<AxisSpec>) -> Self {
        Self {
            name: name.into(),
            base,
            axes,
            outputs: vec![Measure::EAm, Measure::EMb, Measure::EAb, Measure::RMin],
            search: None,
            tolerances: Tolerances::default(),
        }
    }

    pub fn with_outputs(mut self, outputs: &[Measure]) -> Self {
        self.outputs = outputs.to_vec();
        self
    }

    pub fn with_search(mut self, search: DetuningSearch) -> Self {
        self.search = Some(search);
        self
    }

    pub fn validate(&self) -> Result<(), SweepError> {
        if self.axes.is_empty() || self.axes.len() > 2 {
            return Err(SweepError::InvalidSpec(format!(
                "a sweep needs 1 or 2 axes, got {}",
                self.axes.len()
            )));
        }
        for (i, ax) in self.axes.iter().enumerate() {
            if ax.points < 2 {
                return Err(SweepError::InvalidSpec(format!(
                    "axis {} needs at least 2 points",
                    ax.axis
                )));
            }
            if !(ax.min.is_finite() && ax.max.is_finite() && ax.min < ax.max) {
                return Err(SweepError::InvalidSpec(format!(
                    "axis {} needs finite min < max, got [{}, {}]",
                    ax.axis, ax.min, ax.max
                )));
            }
            if self.axes[..i].iter().any(|o| o.axis == ax.axis) {
                return Err(SweepError::InvalidSpec(format!("axis {} repeated", ax.axis)));
            }
        }
        if self.outputs.is_empty() {
            return Err(SweepError::InvalidSpec("no outputs requested".into()));
        }
        if let Some(s) = &self.search {
            if self.axes.iter().any(|a| a.axis == Axis::DeltaA) {
                return Err(SweepError::InvalidSpec(
                    "delta_a cannot be both swept and optimized".into(),
                ));
            }
            if !(s.min < s.max) || s.grid_points < 2 {
                return Err(SweepError::InvalidSpec(
                    "detuning search needs min < max and at least 2 points".into(),
                ));
            }
        }
        self.base.validate()?;
        Ok(())
    }

    /// Number of grid points.
    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.points).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Grid coordinates in row-major order (last axis fastest).
    pub fn grid(&self) -> Vec<Vec<f64>> {
        let values: Vec<Vec<f64>> = self.axes.iter().map(AxisSpec::values).collect();
        let mut out = vec![Vec::new()];
        for vals in &values {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    vals.iter().map(move |&v| {
                        let mut p = prefix.clone();
                        p.push(v);
                        p
                    })
                })
                .collect();
        }
        out
    }

    /// Parameters at one grid coordinate.
    pub fn params_at(&self, coords: &[f64]) -> SystemParams {
        self.axes
            .iter()
            .zip(coords)
            .fold(self.base.clone(), |p, (ax, &v)| ax.axis.apply(&p, v))
    }
}
