use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use magnomech::model::constants::TWO_PI;
use magnomech::model::{
    derive, drift_matrix, magnon_amplitude_approx, stability_check_with_margin, validity_report,
    DerivedState, ValidityReport,
};
use magnomech::sweep::output::{axis_unit, csv_string, display_axis_value, format_number, summarize, SweepSummary};
use magnomech::sweep::{figure_preset_by_name, figure_preset_with_resolution, steady_state, measures, Tolerances};
use magnomech::{run_sweep, Coupling, Execution, SweepResult, SweepSpec, SystemParams};
use serde::Serialize;

use crate::config::{model_config_error, params_record, ConfigFile, RunConfig};
use crate::error::CliError;

fn table(rows: &[(&str, String)]) -> String {
    let width = rows.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
    let mut out = String::new();
    for (k, v) in rows {
        let _ = writeln!(out, "{k:<width$}  {v}");
    }
    out
}

fn sci(x: f64) -> String {
    format!("{x:.6e}")
}

fn freq(w: f64) -> String {
    format!("{:.6e} Hz", w / TWO_PI)
}

fn na() -> String {
    "n/a".into()
}

fn yes_no(b: bool) -> String {
    (if b { "yes" } else { "no" }).into()
}

fn derive_or_fail(p: &SystemParams) -> Result<DerivedState, CliError> {
    derive(p).map_err(|e| CliError::Derivation(e.to_string()))
}

fn validity_rows(rows: &mut Vec<(&str, String)>, v: Option<&ValidityReport>) {
    match v {
        Some(v) => {
            rows.push(("low_excitation_ratio", sci(v.low_excitation_ratio)));
            rows.push(("low_excitation_ok", yes_no(v.low_excitation_ok)));
            rows.push(("kerr_ratio", v.kerr_ratio.map_or("n/a (no drive)".into(), sci)));
            rows.push(("kerr_ok", yes_no(v.kerr_ok)));
        }
        None => {
            rows.push(("low_excitation_ratio", na()));
            rows.push(("kerr_ratio", na()));
        }
    }
}

/// `key,value` lines with a header.
fn csv_table(rows: &[(&str, String)]) -> String {
    let mut out = String::from("quantity,value\n");
    for (k, v) in rows {
        let _ = writeln!(out, "{k},{v}");
    }
    out
}

pub fn derive_cmd(cfg: &RunConfig, csv: bool) -> Result<String, CliError> {
    let p = &cfg.params;
    let d = derive_or_fail(p)?;
    let mode = match p.coupling {
        Coupling::Direct { .. } => "direct",
        Coupling::Physical(_) => "physical",
    };
    let mut rows: Vec<(&str, String)> = vec![
        ("coupling_mode", mode.into()),
        ("omega_a/2pi", freq(p.omega_a)),
        ("omega_b/2pi", freq(p.omega_b)),
        ("delta_a/2pi", freq(p.delta_a)),
        ("delta_m_eff/2pi", freq(p.delta_m_eff)),
        ("kappa_a/2pi", freq(p.kappa_a)),
        ("kappa_m/2pi", freq(p.kappa_m)),
        ("gamma_b/2pi", freq(p.gamma_b)),
        ("g_ma/2pi", freq(p.g_ma)),
        ("temperature", format!("{} K", p.temperature)),
        ("n_spins", d.n_spins.map_or_else(na, sci)),
        ("rabi_omega/2pi", d.rabi_omega.map_or_else(na, freq)),
    ];
    match (d.m_mean, d.rabi_omega) {
        (Some(m), Some(rabi)) => {
            rows.push(("m_mean exact", format!("{} {:+.6e}i", sci(m.re), m.im)));
            rows.push(("|m_mean| exact", sci(m.norm())));
            match magnon_amplitude_approx(p, rabi) {
                Ok(a) => {
                    rows.push(("m_mean approx", format!("{} {:+.6e}i", sci(a.re), a.im)));
                    rows.push(("|m_mean| approx", sci(a.norm())));
                    let rel = if m.norm() > 0.0 { (m.norm() - a.norm()).abs() / m.norm() } else { 0.0 };
                    rows.push(("|m_mean| rel diff", sci(rel)));
                }
                Err(e) => rows.push(("m_mean approx", format!("n/a ({e})"))),
            }
        }
        _ => {
            rows.push(("m_mean exact", na()));
            rows.push(("m_mean approx", na()));
        }
    }
    rows.push(("q_mean", d.q_mean.map_or_else(na, sci)));
    rows.push(("magnon_occupation", d.magnon_occupation.map_or_else(na, sci)));
    rows.push(("G_mb/2pi", freq(d.g_mb_eff)));
    rows.push(("G_mb/g_ma", format!("{:.6}", d.g_mb_eff / p.g_ma)));
    rows.push(("n_therm_a", sci(d.n_therm_a)));
    rows.push(("n_therm_m", sci(d.n_therm_m)));
    rows.push(("n_therm_b", sci(d.n_therm_b)));
    validity_rows(&mut rows, d.validity.as_ref());
    Ok(if csv { csv_table(&rows) } else { table(&rows) })
}

/// Report and verdict; an unstable drift matrix yields the report together
/// with the error.
pub fn stability_cmd(cfg: &RunConfig) -> (String, Result<(), CliError>) {
    let p = &cfg.params;
    let d = match derive_or_fail(p) {
        Ok(d) => d,
        Err(e) => return (String::new(), Err(e)),
    };
    let a = drift_matrix(p, d.g_mb_eff);
    let v = match stability_check_with_margin(&a, cfg.tolerances.stability_margin) {
        Ok(v) => v,
        Err(e) => return (String::new(), Err(CliError::Derivation(e.to_string()))),
    };
    let mut out = table(&[
        ("stable", yes_no(v.stable)),
        ("max_real_eig", format!("{} omega_b", sci(v.max_real_part))),
        ("stability_margin", sci(cfg.tolerances.stability_margin)),
    ]);
    out.push_str("eigenvalues (units of omega_b):\n");
    for z in &v.eigenvalues {
        let _ = writeln!(out, "  {:+.9e} {:+.9e}i", z.re, z.im);
    }
    let verdict = if v.stable {
        Ok(())
    } else {
        Err(CliError::Unstable { max_real_eig: v.max_real_part })
    };
    (out, verdict)
}

pub fn entangle_cmd(cfg: &RunConfig) -> Result<String, CliError> {
    let tol = &cfg.tolerances;
    let ss = steady_state(&cfg.params, tol)?;
    let Some(v) = &ss.covariance else {
        return Err(CliError::Unstable { max_real_eig: ss.stability.max_real_part });
    };
    let phys = v
        .physicality()
        .map_err(|e| CliError::Derivation(e.to_string()))?;
    if !phys.is_physical() {
        return Err(CliError::Unphysical(format!(
            "smallest eigenvalue of V + i/2 Omega is {:.3e}",
            phys.min_eigenvalue
        )));
    }
    let m = measures(v, tol)?;
    let mut rows: Vec<(&str, String)> = vec![
        ("stable", yes_no(true)),
        ("max_real_eig", format!("{} omega_b", sci(ss.stability.max_real_part))),
        ("G_mb/2pi", freq(ss.derived.g_mb_eff)),
        ("E_am", format!("{:.9}", m.e_am)),
        ("E_mb", format!("{:.9}", m.e_mb)),
        ("E_ab", format!("{:.9}", m.e_ab)),
        ("R_a|mb", sci(m.residuals[0])),
        ("R_m|ab", sci(m.residuals[1])),
        ("R_b|am", sci(m.residuals[2])),
        ("R_min", sci(m.r_min)),
        ("genuine_tripartite", yes_no(m.genuine)),
        ("monogamy_violated", yes_no(m.monogamy_violated)),
        ("lyapunov_residual", ss.lyapunov_residual.map_or_else(na, sci)),
    ];
    validity_rows(&mut rows, ss.validity.as_ref());
    Ok(table(&rows))
}

pub fn validate_cmd(cfg: &RunConfig) -> (String, Result<(), CliError>) {
    match validity_table(cfg) {
        Ok((out, verdict)) => (out, verdict),
        Err(e) => (String::new(), Err(e)),
    }
}

fn validity_table(cfg: &RunConfig) -> Result<(String, Result<(), CliError>), CliError> {
    let p = &cfg.params;
    if p.physical_drive().is_none() {
        return Err(CliError::Derivation(
            "validity checks need coupling_mode = \"physical\"".into(),
        ));
    }
    let d = derive_or_fail(p)?;
    let r = validity_report(p, &d, cfg.tolerances.validity()).map_err(model_config_error)?;
    let mut rows: Vec<(&str, String)> = vec![
        ("magnon_occupation", sci(r.magnon_occupation)),
        ("excitation_capacity", sci(r.excitation_capacity)),
        ("low_excitation_ratio", sci(r.low_excitation_ratio)),
        ("low_excitation_limit", sci(r.thresholds.low_excitation)),
        ("low_excitation_ok", yes_no(r.low_excitation_ok)),
        ("kerr_coefficient/2pi", freq(r.kerr_coefficient)),
        ("kerr_term/2pi", freq(r.kerr_term)),
        ("kerr_ratio", r.kerr_ratio.map_or("n/a (no drive)".into(), sci)),
        ("kerr_limit", sci(r.thresholds.kerr)),
        ("kerr_ok", yes_no(r.kerr_ok)),
    ];
    rows.push(("verdict", (if r.passed() { "pass" } else { "fail" }).into()));
    let out = table(&rows);
    if r.passed() {
        Ok((out, Ok(())))
    } else {
        let mut failed = Vec::new();
        if !r.low_excitation_ok {
            failed.push("low excitation");
        }
        if !r.kerr_ok {
            failed.push("Kerr negligibility");
        }
        Ok((out, Err(CliError::Validity(failed.join(", ")))))
    }
}

#[derive(Serialize)]
struct AxisMeta {
    axis: &'static str,
    unit: &'static str,
    min: f64,
    max: f64,
    points: usize,
}

#[derive(Serialize)]
struct SearchMeta {
    parameter: &'static str,
    unit: &'static str,
    min: f64,
    max: f64,
    grid_points: usize,
}

#[derive(Serialize)]
struct Meta<'a> {
    name: &'a str,
    version: &'static str,
    parameters: ConfigFile,
    axes: Vec<AxisMeta>,
    outputs: Vec<&'static str>,
    search: Option<SearchMeta>,
    tolerances: Tolerances,
    summary: SweepSummary,
}

fn meta_json(result: &SweepResult) -> Result<String, CliError> {
    let spec = &result.spec;
    let wb = spec.base.omega_b;
    let meta = Meta {
        name: &spec.name,
        version: env!("CARGO_PKG_VERSION"),
        parameters: params_record(&spec.base),
        axes: spec
            .axes
            .iter()
            .map(|a| AxisMeta {
                axis: a.axis.name(),
                unit: axis_unit(a.axis),
                min: display_axis_value(a.axis, a.min, wb),
                max: display_axis_value(a.axis, a.max, wb),
                points: a.points,
            })
            .collect(),
        outputs: spec.outputs.iter().map(|m| m.name()).collect(),
        search: spec.search.map(|s| SearchMeta {
            parameter: "delta_a",
            unit: "omega_b",
            min: s.min / wb,
            max: s.max / wb,
            grid_points: s.grid_points,
        }),
        tolerances: spec.tolerances,
        summary: summarize(result),
    };
    let mut s = serde_json::to_string_pretty(&meta).map_err(|e| CliError::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn summary_text(result: &SweepResult) -> String {
    let s = summarize(result);
    let mut out = format!(
        "{}: {} points, {} stable ({:.1}%), {} failures\n",
        result.spec.name,
        s.points,
        s.stable,
        100.0 * s.stable_fraction,
        s.failures
    );
    for m in &s.measures {
        let at: Vec<String> = m.argmax.iter().map(|&x| format_number(x)).collect();
        match m.max {
            Some(v) => {
                let _ = writeln!(out, "  max {} = {} at ({})", m.measure.name(), format_number(v), at.join(", "));
            }
            None => {
                let _ = writeln!(out, "  max {} = n/a", m.measure.name());
            }
        }
    }
    out
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// Writes `<name>.csv` and `<name>.meta.json` into `dir`.
fn write_outputs(result: &SweepResult, dir: &Path) -> Result<(PathBuf, PathBuf), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    let csv = dir.join(format!("{}.csv", result.spec.name));
    let meta = dir.join(format!("{}.meta.json", result.spec.name));
    write_file(&csv, &csv_string(result)?)?;
    write_file(&meta, &meta_json(result)?)?;
    Ok((csv, meta))
}

fn run(spec: &SweepSpec, workers: usize) -> Result<SweepResult, CliError> {
    Ok(run_sweep(spec, Execution::with_workers(workers))?)
}

/// Runs the configured sweep. Without an output directory the CSV goes to
/// stdout and the summary to stderr.
pub fn sweep_cmd(cfg: &RunConfig, out: Option<&Path>) -> Result<String, CliError> {
    let spec = cfg
        .sweep
        .as_ref()
        .ok_or_else(|| CliError::Config("the sweep command needs a `sweep` section".into()))?;
    let result = run(spec, cfg.workers)?;
    match out.or(cfg.output_path.as_deref()) {
        Some(dir) => {
            let (csv, meta) = write_outputs(&result, dir)?;
            Ok(format!(
                "{}wrote {}\nwrote {}\n",
                summary_text(&result),
                csv.display(),
                meta.display()
            ))
        }
        None => {
            eprint!("{}", summary_text(&result));
            Ok(csv_string(&result)?)
        }
    }
}

pub fn reproduce_cmd(
    cfg: &RunConfig,
    figure: &str,
    points: Option<usize>,
    out: Option<&Path>,
) -> Result<String, CliError> {
    let mut spec = match points {
        Some(n) => figure_preset_with_resolution(figure.parse()?, n),
        None => figure_preset_by_name(figure)?,
    };
    if cfg.file.has_parameters() {
        spec.base = cfg.file.apply_params(spec.base)?;
    }
    spec.tolerances = cfg.tolerances;
    spec.validate()?;
    let result = run(&spec, cfg.workers)?;
    let dir = out.or(cfg.output_path.as_deref()).unwrap_or(Path::new("."));
    let (csv, meta) = write_outputs(&result, dir)?;
    Ok(format!(
        "{}wrote {}\nwrote {}\n",
        summary_text(&result),
        csv.display(),
        meta.display()
    ))
}
