use serde::{Deserialize, Serialize};

use super::evaluate::{evaluate_point, PointResult};
use super::optimize::{optimize_measures_over_detuning, Optimum};
use super::{Measure, SweepError, SweepSpec};

/// How grid points are scheduled. Results do not depend on the choice.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Execution {
    Serial,
    /// Worker pool of the given size. Without the `parallel` feature this
    /// runs serially.
    Parallel { workers: usize },
}

impl Execution {
    pub fn with_workers(workers: usize) -> Self {
        if workers <= 1 {
            Execution::Serial
        } else {
            Execution::Parallel { workers }
        }
    }
}

/// Optimized value of one measure at a grid point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizedMeasure {
    pub measure: Measure,
    pub optimum: Option<Optimum>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RowOutcome {
    Point(PointResult),
    Optimized { measures: Vec<OptimizedMeasure> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    /// Coordinates in axis order (internal units).
    pub axis_values: Vec<f64>,
    pub outcome: RowOutcome,
}

impl SweepRow {
    pub fn point(&self) -> Option<&PointResult> {
        match &self.outcome {
            RowOutcome::Point(p) => Some(p),
            RowOutcome::Optimized { .. } => None,
        }
    }

    /// The measure value shown for this row: the point value, or the
    /// optimized value when Δ_a is searched.
    pub fn value(&self, m: Measure) -> Option<f64> {
        match &self.outcome {
            RowOutcome::Point(p) => p.measure(m),
            RowOutcome::Optimized { measures } => measures
                .iter()
                .find(|o| o.measure == m)
                .and_then(|o| o.optimum.map(|x| x.value)),
        }
    }

    pub fn errors(&self) -> Vec<String> {
        match &self.outcome {
            RowOutcome::Point(p) => p.error.iter().cloned().collect(),
            RowOutcome::Optimized { measures } => {
                measures.iter().filter_map(|o| o.error.clone()).collect()
            }
        }
    }
}

/// Table of evaluated grid points in row-major order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub spec: SweepSpec,
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    /// `(row index, message)` for every point whose evaluation failed.
    pub fn failures(&self) -> Vec<(usize, String)> {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.errors().into_iter().map(move |e| (i, e)))
            .collect()
    }

    pub fn stable_count(&self) -> usize {
        self.rows
            .iter()
            .filter(|r| r.point().is_none_or(|p| p.stable))
            .count()
    }
}

fn evaluate_row(spec: &SweepSpec, coords: &[f64]) -> SweepRow {
    let p = spec.params_at(coords);
    let outcome = match &spec.search {
        None => RowOutcome::Point(evaluate_point(&p, &spec.tolerances)),
        Some(s) => {
            let results = optimize_measures_over_detuning(
                &p,
                &spec.outputs,
                (s.min, s.max),
                s.grid_points,
                &spec.tolerances,
            );
            RowOutcome::Optimized {
                measures: spec
                    .outputs
                    .iter()
                    .zip(results)
                    .map(|(&measure, r)| match r {
                        Ok(o) => OptimizedMeasure {
                            measure,
                            optimum: Some(o),
                            error: None,
                        },
                        Err(e) => OptimizedMeasure {
                            measure,
                            optimum: None,
                            error: Some(e.to_string()),
                        },
                    })
                    .collect(),
            }
        }
    };
    SweepRow {
        axis_values: coords.to_vec(),
        outcome,
    }
}

#[cfg(feature = "parallel")]
fn evaluate_all(
    spec: &SweepSpec,
    grid: &[Vec<f64>],
    exec: Execution,
) -> Result<Vec<SweepRow>, SweepError> {
    use rayon::prelude::*;
    match exec {
        Execution::Serial => Ok(grid.iter().map(|c| evaluate_row(spec, c)).collect()),
        Execution::Parallel { workers } => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(workers.max(1))
                .build()
                .map_err(|e| SweepError::WorkerPool(e.to_string()))?;
            // `collect` on an indexed iterator writes each row into its slot.
            Ok(pool.install(|| grid.par_iter().map(|c| evaluate_row(spec, c)).collect()))
        }
    }
}

#[cfg(not(feature = "parallel"))]
fn evaluate_all(
    spec: &SweepSpec,
    grid: &[Vec<f64>],
    _exec: Execution,
) -> Result<Vec<SweepRow>, SweepError> {
    Ok(grid.iter().map(|c| evaluate_row(spec, c)).collect())
}

/// Evaluates every grid point of `spec`. Per-point failures are recorded in
/// the rows; only an invalid spec or a worker-pool failure is an error.
pub fn run_sweep(spec: &SweepSpec, exec: Execution) -> Result<SweepResult, SweepError> {
    spec.validate()?;
    let grid = spec.grid();
    let rows = evaluate_all(spec, &grid, exec)?;
    Ok(SweepResult {
        spec: spec.clone(),
        rows,
    })
}
