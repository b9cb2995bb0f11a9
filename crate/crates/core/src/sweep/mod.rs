//! Pipeline evaluation over parameter grids.
//!
//! A grid point goes params → derived quantities → drift/diffusion →
//! stability → covariance matrix → entanglement measures. Points are
//! independent and may be evaluated in parallel; output order and values do
//! not depend on the worker count.

mod evaluate;
mod optimize;
pub mod output;
mod presets;
mod run;
mod spec;

use thiserror::Error;

use crate::gaussian::GaussianError;
use crate::linalg::LinalgError;
use crate::model::ModelError;

pub use evaluate::{
    evaluate_point, measures, steady_state, Measures, PointResult, SteadyState, ValidityFlags,
};
pub use optimize::{optimize_measures_over_detuning, optimize_over_detuning, Optimum, ZERO_OBJECTIVE};
pub use presets::{
    figure_preset, figure_preset_with_resolution, Figure, G_RATIO_MAX, INSET_TEMPERATURE_RANGE,
};
pub use run::{run_sweep, Execution, OptimizedMeasure, RowOutcome, SweepResult, SweepRow};
pub use spec::{
    Axis, AxisSpec, DetuningSearch, Measure, SweepSpec, Tolerances, DEFAULT_POINTS,
    DEFAULT_SEARCH_POINTS,
};

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("invalid sweep: {0}")]
    InvalidSpec(String),
    #[error("unknown figure preset `{0}`")]
    UnknownPreset(String),
    #[error("no stable point for delta_a in [{min:.6e}, {max:.6e}] rad/s")]
    NoStablePoint { min: f64, max: f64 },
    #[error("worker pool: {0}")]
    WorkerPool(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Gaussian(#[from] GaussianError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

/// Looks up a figure preset by name.
pub fn figure_preset_by_name(name: &str) -> Result<SweepSpec, SweepError> {
    Ok(figure_preset(name.parse()?))
}
