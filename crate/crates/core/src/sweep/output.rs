//! CSV serialization and summary statistics of sweep tables.
//!
//! Frequency axes are written in units of ω_b, temperature in K and the
//! coupling ratio as a plain number. Numbers use 12 significant digits.

use std::io::Write;

use serde::{Deserialize, Serialize};

use super::run::{RowOutcome, SweepResult};
use super::{Axis, Measure, SweepError};

/// Formats like C's `%.12g`: 12 significant digits, trailing zeros trimmed,
/// scientific notation only for very large or small magnitudes.
pub fn format_number(x: f64) -> String {
    const SIG: i32 = 12;
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{:.*e}", (SIG - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..SIG).contains(&exp) {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (SIG - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Axis value in output units.
pub fn display_axis_value(axis: Axis, value: f64, omega_b: f64) -> f64 {
    if axis.is_frequency() {
        value / omega_b
    } else {
        value
    }
}

pub fn axis_unit(axis: Axis) -> &'static str {
    match axis {
        Axis::DeltaA | Axis::DeltaMEff | Axis::KappaA => "omega_b",
        Axis::Temperature => "K",
        Axis::GRatio => "1",
    }
}

/// Column names of the CSV table.
pub fn csv_header(result: &SweepResult) -> Vec<String> {
    let spec = &result.spec;
    let mut cols: Vec<String> = spec.axes.iter().map(|a| a.axis.name().to_string()).collect();
    if spec.search.is_some() {
        cols.extend(spec.outputs.iter().map(|m| format!("{}_opt", m.name())));
    } else {
        cols.push("stable".into());
        cols.extend(spec.outputs.iter().map(|m| m.name().to_string()));
    }
    cols
}

fn opt_field(v: Option<f64>) -> String {
    v.map(format_number).unwrap_or_default()
}

/// Writes the table as CSV with a header row and LF line endings.
pub fn write_csv<W: Write>(result: &SweepResult, out: W) -> Result<(), SweepError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(csv_header(result))?;
    let spec = &result.spec;
    let omega_b = spec.base.omega_b;
    for row in &result.rows {
        let mut rec: Vec<String> = spec
            .axes
            .iter()
            .zip(&row.axis_values)
            .map(|(a, &v)| format_number(display_axis_value(a.axis, v, omega_b)))
            .collect();
        if let RowOutcome::Point(p) = &row.outcome {
            rec.push(if p.stable { "true" } else { "false" }.into());
        }
        rec.extend(spec.outputs.iter().map(|&m| opt_field(row.value(m))));
        w.write_record(&rec)?;
    }
    w.flush().map_err(SweepError::Io)?;
    Ok(())
}

/// CSV as a string.
pub fn csv_string(result: &SweepResult) -> Result<String, SweepError> {
    let mut buf = Vec::new();
    write_csv(result, &mut buf)?;
    Ok(String::from_utf8(buf).expect("CSV output is ASCII"))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasureSummary {
    pub measure: Measure,
    pub max: Option<f64>,
    /// Axis coordinates (output units) of the first row attaining `max`.
    pub argmax: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub points: usize,
    pub stable: usize,
    pub stable_fraction: f64,
    pub failures: usize,
    pub measures: Vec<MeasureSummary>,
}

pub fn summarize(result: &SweepResult) -> SweepSummary {
    let spec = &result.spec;
    let omega_b = spec.base.omega_b;
    let points = result.rows.len();
    let stable = result.stable_count();
    let measures = spec
        .outputs
        .iter()
        .map(|&m| {
            let mut best: Option<(usize, f64)> = None;
            for (i, r) in result.rows.iter().enumerate() {
                if let Some(v) = r.value(m) {
                    if best.is_none_or(|(_, b)| v > b) {
                        best = Some((i, v));
                    }
                }
            }
            MeasureSummary {
                measure: m,
                max: best.map(|b| b.1),
                argmax: best
                    .map(|(i, _)| {
                        spec.axes
                            .iter()
                            .zip(&result.rows[i].axis_values)
                            .map(|(a, &v)| display_axis_value(a.axis, v, omega_b))
                            .collect()
                    })
                    .unwrap_or_default(),
            }
        })
        .collect();
    SweepSummary {
        points,
        stable,
        stable_fraction: if points == 0 { 0.0 } else { stable as f64 / points as f64 },
        failures: result.failures().len(),
        measures,
    }
}
