use std::fmt;
use std::str::FromStr;

use crate::model::SystemParams;

use super::spec::{AxisSpec, DetuningSearch, DEFAULT_POINTS, DEFAULT_SEARCH_POINTS};
use super::{Axis, Measure, SweepError, SweepSpec};

/// Reproducible figure panels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Figure {
    Fig2a,
    Fig2b,
    Fig2c,
    Fig2d,
    Fig3a,
    Fig3aInset,
    Fig3b,
    Fig4a,
    Fig4b,
}

impl Figure {
    pub const ALL: [Figure; 9] = [
        Figure::Fig2a,
        Figure::Fig2b,
        Figure::Fig2c,
        Figure::Fig2d,
        Figure::Fig3a,
        Figure::Fig3aInset,
        Figure::Fig3b,
        Figure::Fig4a,
        Figure::Fig4b,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Figure::Fig2a => "fig2a",
            Figure::Fig2b => "fig2b",
            Figure::Fig2c => "fig2c",
            Figure::Fig2d => "fig2d",
            Figure::Fig3a => "fig3a",
            Figure::Fig3aInset => "fig3a_inset",
            Figure::Fig3b => "fig3b",
            Figure::Fig4a => "fig4a",
            Figure::Fig4b => "fig4b",
        }
    }
}

impl fmt::Display for Figure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Figure {
    type Err = SweepError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Figure::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| SweepError::UnknownPreset(s.to_string()))
    }
}

/// Temperature range of the inset, K.
pub const INSET_TEMPERATURE_RANGE: (f64, f64) = (0.01, 0.41);

/// Upper bound of the G_mb/g_ma axis.
pub const G_RATIO_MAX: f64 = 2.0;

const BIPARTITE: [Measure; 3] = [Measure::EAm, Measure::EMb, Measure::EAb];

/// Sweep of a figure panel. Detuning axes span ±2ω_b.
pub fn figure_preset(fig: Figure) -> SweepSpec {
    figure_preset_with_resolution(fig, DEFAULT_POINTS)
}

/// As [`figure_preset`] with `points` per axis.
pub fn figure_preset_with_resolution(fig: Figure, points: usize) -> SweepSpec {
    let detuning = |axis, base: &SystemParams| {
        AxisSpec::new(axis, -2.0 * base.omega_b, 2.0 * base.omega_b, points)
    };
    let map = |name, out| {
        let base = SystemParams::fig2();
        SweepSpec::new(
            name,
            base.clone(),
            vec![detuning(Axis::DeltaA, &base), detuning(Axis::DeltaMEff, &base)],
        )
        .with_outputs(&[out])
    };
    let line = |name, base: SystemParams, outs: &[Measure]| {
        SweepSpec::new(name, base.clone(), vec![detuning(Axis::DeltaA, &base)]).with_outputs(outs)
    };
    let name = fig.name();
    match fig {
        Figure::Fig2a => map(name, Measure::EAm),
        Figure::Fig2b => map(name, Measure::EMb),
        Figure::Fig2c => map(name, Measure::EAb),
        Figure::Fig2d => {
            let base = SystemParams::fig2();
            SweepSpec::new(
                name,
                base.clone(),
                vec![
                    detuning(Axis::DeltaA, &base),
                    AxisSpec::new(Axis::GRatio, 0.0, G_RATIO_MAX, points),
                ],
            )
            .with_outputs(&[Measure::EAm])
        }
        Figure::Fig3a => line(name, SystemParams::fig3(), &BIPARTITE),
        Figure::Fig3b => line(name, SystemParams::fig3(), &[Measure::RMin]),
        Figure::Fig4a => line(name, SystemParams::fig4(), &BIPARTITE),
        Figure::Fig4b => line(name, SystemParams::fig4(), &[Measure::RMin]),
        Figure::Fig3aInset => {
            let base = SystemParams::fig3();
            let (t0, t1) = INSET_TEMPERATURE_RANGE;
            SweepSpec::new(
                name,
                base.clone(),
                vec![AxisSpec::new(Axis::Temperature, t0, t1, points)],
            )
            .with_outputs(&BIPARTITE)
            .with_search(DetuningSearch {
                min: -2.0 * base.omega_b,
                max: 2.0 * base.omega_b,
                grid_points: DEFAULT_SEARCH_POINTS,
            })
        }
    }
}
