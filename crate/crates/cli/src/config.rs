//! JSON configuration: schema, command-line overrides and resolution into
//! library types.
//!
//! Frequencies are ordinary frequencies in Hz (`*_hz` keys) and are converted
//! to angular frequencies internally. Sweep axis bounds use the table units:
//! multiples of ω_b for frequency axes, K for temperature.

use std::path::{Path, PathBuf};

use magnomech::model::constants::{hz, TWO_PI};
use magnomech::model::ModelError;
use magnomech::sweep::{Axis, AxisSpec, DetuningSearch, Measure, Tolerances, DEFAULT_POINTS, DEFAULT_SEARCH_POINTS};
use magnomech::{Coupling, PhysicalDrive, SweepSpec, SystemParams};
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::CliError;

pub const WORKERS_ENV: &str = "MAGNOMECH_WORKERS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CouplingMode {
    Direct,
    Physical,
}

/// The configuration file. Every key is optional; missing parameters take
/// the defaults of the base parameter set.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega_a_hz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega_b_hz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_a_hz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_m_eff_hz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa_a_hz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa_m_hz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma_b_hz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g_ma_hz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub temperature: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coupling_mode: Option<CouplingMode>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g_mb_eff_hz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g_mb_hz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sphere_diameter: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spin_density: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gyromagnetic_ratio_hz_per_t: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spin_s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kerr_1mm_hz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output_path: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<Tolerances>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(default)]
    pub name: Option<String>,
    pub axes: Vec<AxisConfig>,
    #[serde(default)]
    pub outputs: Option<Vec<Measure>>,
    #[serde(default)]
    pub search: Option<SearchConfig>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisConfig {
    pub axis: Axis,
    pub min: f64,
    pub max: f64,
    #[serde(default)]
    pub points: Option<usize>,
}

/// Δ_a search range in units of ω_b.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchConfig {
    pub min: f64,
    pub max: f64,
    #[serde(default)]
    pub grid_points: Option<usize>,
}

/// Fully resolved configuration.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub params: SystemParams,
    pub sweep: Option<SweepSpec>,
    pub output_path: Option<PathBuf>,
    pub workers: usize,
    pub tolerances: Tolerances,
    pub file: ConfigFile,
}

/// Reads the config file (or an empty object) and applies `key=value`
/// overrides in order. Dotted keys reach into nested objects.
pub fn load(path: Option<&Path>, overrides: &[(String, Value)]) -> Result<ConfigFile, CliError> {
    let mut doc = match path {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", p.display())))?;
            serde_json::from_str::<Value>(&text)
                .map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?
        }
        None => Value::Object(Map::new()),
    };
    if !doc.is_object() {
        return Err(CliError::Config("config must be a JSON object".into()));
    }
    for (key, value) in overrides {
        set_path(&mut doc, key, value.clone())?;
    }
    serde_path_to_error::deserialize(doc).map_err(|e| {
        let path = e.path().to_string();
        CliError::Config(format!("at `{path}`: {}", e.into_inner()))
    })
}

fn set_path(doc: &mut Value, key: &str, value: Value) -> Result<(), CliError> {
    let mut cur = doc;
    let parts: Vec<&str> = key.split('.').collect();
    for (i, part) in parts.iter().enumerate() {
        if part.is_empty() {
            return Err(CliError::Config(format!("malformed key `{key}`")));
        }
        let obj = cur
            .as_object_mut()
            .ok_or_else(|| CliError::Config(format!("`{key}`: `{part}` is not inside an object")))?;
        if i + 1 == parts.len() {
            obj.insert(part.to_string(), value);
            return Ok(());
        }
        cur = obj
            .entry(part.to_string())
            .or_insert_with(|| Value::Object(Map::new()));
    }
    Ok(())
}

/// Parses `key=value`. The value is read as JSON when possible and as a
/// plain string otherwise.
pub fn parse_override(s: &str) -> Result<(String, Value), CliError> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| CliError::Config(format!("override `{s}` is not of the form key=value")))?;
    let value = serde_json::from_str(v).unwrap_or_else(|_| Value::String(v.to_string()));
    Ok((k.trim().to_string(), value))
}

/// Config key of a parameter reported by validation.
pub fn config_key(field: &str) -> String {
    match field {
        "gyromagnetic_ratio" => "gyromagnetic_ratio_hz_per_t".into(),
        "omega_a" | "omega_b" | "delta_a" | "delta_m_eff" | "kappa_a" | "kappa_m" | "gamma_b"
        | "g_ma" | "g_mb_eff" | "g_mb" | "kerr_1mm" => format!("{field}_hz"),
        other => other.into(),
    }
}

pub fn model_config_error(e: ModelError) -> CliError {
    match e {
        ModelError::InvalidParameter { field, reason } => {
            let key = config_key(field);
            // Library messages quote angular values.
            let reason = match reason.rsplit_once(", got ") {
                Some((head, v)) if key.contains("_hz") => match v.parse::<f64>() {
                    Ok(w) => format!("{head}, got {}", w / TWO_PI),
                    Err(_) => reason,
                },
                _ => reason,
            };
            CliError::Config(format!("`{key}` {reason}"))
        }
        other => CliError::Derivation(other.to_string()),
    }
}

const PHYSICAL_KEYS: [&str; 7] = [
    "b0",
    "g_mb_hz",
    "sphere_diameter",
    "spin_density",
    "gyromagnetic_ratio_hz_per_t",
    "spin_s",
    "kerr_1mm_hz",
];

impl ConfigFile {
    fn physical_keys_set(&self) -> Vec<&'static str> {
        let set = [
            self.b0.is_some(),
            self.g_mb_hz.is_some(),
            self.sphere_diameter.is_some(),
            self.spin_density.is_some(),
            self.gyromagnetic_ratio_hz_per_t.is_some(),
            self.spin_s.is_some(),
            self.kerr_1mm_hz.is_some(),
        ];
        PHYSICAL_KEYS
            .iter()
            .zip(set)
            .filter(|(_, s)| *s)
            .map(|(k, _)| *k)
            .collect()
    }

    /// Whether any system parameter is given explicitly.
    pub fn has_parameters(&self) -> bool {
        let stripped = ConfigFile {
            sweep: None,
            output_path: None,
            workers: None,
            tolerances: None,
            ..self.clone()
        };
        stripped != ConfigFile::default()
    }

    /// Applies the parameter keys on top of `base`.
    pub fn apply_params(&self, base: SystemParams) -> Result<SystemParams, CliError> {
        let mut p = base;
        let set = |dst: &mut f64, v: Option<f64>, f: fn(f64) -> f64| {
            if let Some(v) = v {
                *dst = f(v);
            }
        };
        set(&mut p.omega_a, self.omega_a_hz, hz);
        set(&mut p.omega_b, self.omega_b_hz, hz);
        set(&mut p.delta_a, self.delta_a_hz, hz);
        set(&mut p.delta_m_eff, self.delta_m_eff_hz, hz);
        set(&mut p.kappa_a, self.kappa_a_hz, hz);
        set(&mut p.kappa_m, self.kappa_m_hz, hz);
        set(&mut p.gamma_b, self.gamma_b_hz, hz);
        set(&mut p.g_ma, self.g_ma_hz, hz);
        set(&mut p.temperature, self.temperature, |t| t);

        let current = match &p.coupling {
            Coupling::Direct { .. } => CouplingMode::Direct,
            Coupling::Physical(_) => CouplingMode::Physical,
        };
        match self.coupling_mode.unwrap_or(current) {
            CouplingMode::Direct => {
                if let Some(k) = self.physical_keys_set().first() {
                    return Err(CliError::Config(format!(
                        "`{k}` requires coupling_mode = \"physical\""
                    )));
                }
                let g = match (&p.coupling, self.g_mb_eff_hz) {
                    (_, Some(g)) => hz(g),
                    (Coupling::Direct { g_mb_eff }, None) => *g_mb_eff,
                    (Coupling::Physical(_), None) => default_direct_coupling(),
                };
                p.coupling = Coupling::Direct { g_mb_eff: g };
            }
            CouplingMode::Physical => {
                if self.g_mb_eff_hz.is_some() {
                    return Err(CliError::Config(
                        "`g_mb_eff_hz` requires coupling_mode = \"direct\"; the physical mode derives it".into(),
                    ));
                }
                let mut d = p.physical_drive().cloned().unwrap_or_else(PhysicalDrive::fig2);
                set(&mut d.b0, self.b0, |x| x);
                set(&mut d.g_mb, self.g_mb_hz, hz);
                set(&mut d.sphere_diameter, self.sphere_diameter, |x| x);
                set(&mut d.spin_density, self.spin_density, |x| x);
                set(&mut d.gyromagnetic_ratio, self.gyromagnetic_ratio_hz_per_t, hz);
                set(&mut d.spin_s, self.spin_s, |x| x);
                set(&mut d.kerr_1mm, self.kerr_1mm_hz, hz);
                p.coupling = Coupling::Physical(d);
            }
        }
        p.validate().map_err(model_config_error)?;
        Ok(p)
    }

    pub fn resolve(self, cli_workers: Option<usize>) -> Result<RunConfig, CliError> {
        let params = self.apply_params(SystemParams::fig2())?;
        let tolerances = self.tolerances.unwrap_or_default();
        let sweep = match &self.sweep {
            Some(s) => Some(s.to_spec(&params, tolerances)?),
            None => None,
        };
        let workers = resolve_workers(cli_workers.or(self.workers))?;
        Ok(RunConfig {
            params,
            sweep,
            output_path: self.output_path.clone(),
            workers,
            tolerances,
            file: self,
        })
    }
}

fn default_direct_coupling() -> f64 {
    match SystemParams::fig2().coupling {
        Coupling::Direct { g_mb_eff } => g_mb_eff,
        Coupling::Physical(_) => unreachable!("default coupling is direct"),
    }
}

/// Worker count from the given value, then `MAGNOMECH_WORKERS`, then the
/// number of available cores.
pub fn resolve_workers(explicit: Option<usize>) -> Result<usize, CliError> {
    let n = match explicit {
        Some(n) => n,
        None => match std::env::var(WORKERS_ENV) {
            Ok(v) => v.trim().parse().map_err(|_| {
                CliError::Config(format!("{WORKERS_ENV}=`{v}` is not a worker count"))
            })?,
            Err(_) => std::thread::available_parallelism().map_or(1, |n| n.get()),
        },
    };
    if n == 0 {
        return Err(CliError::Config("workers must be at least 1".into()));
    }
    Ok(n)
}

impl SweepConfig {
    fn to_spec(&self, base: &SystemParams, tolerances: Tolerances) -> Result<SweepSpec, CliError> {
        let wb = base.omega_b;
        let scale = |axis: Axis| if axis.is_frequency() { wb } else { 1.0 };
        let axes = self
            .axes
            .iter()
            .map(|a| {
                AxisSpec::new(
                    a.axis,
                    a.min * scale(a.axis),
                    a.max * scale(a.axis),
                    a.points.unwrap_or(DEFAULT_POINTS),
                )
            })
            .collect();
        let mut spec = SweepSpec::new(self.name.clone().unwrap_or_else(|| "sweep".into()), base.clone(), axes);
        if let Some(outputs) = &self.outputs {
            spec = spec.with_outputs(outputs);
        }
        if let Some(s) = &self.search {
            spec = spec.with_search(DetuningSearch {
                min: s.min * wb,
                max: s.max * wb,
                grid_points: s.grid_points.unwrap_or(DEFAULT_SEARCH_POINTS),
            });
        }
        spec.tolerances = tolerances;
        spec.validate().map_err(|e| CliError::Config(format!("sweep: {e}")))?;
        Ok(spec)
    }
}

/// Complete parameter record in config units, suitable as a config file.
pub fn params_record(p: &SystemParams) -> ConfigFile {
    let f = |w: f64| Some(w / TWO_PI);
    let mut c = ConfigFile {
        omega_a_hz: f(p.omega_a),
        omega_b_hz: f(p.omega_b),
        delta_a_hz: f(p.delta_a),
        delta_m_eff_hz: f(p.delta_m_eff),
        kappa_a_hz: f(p.kappa_a),
        kappa_m_hz: f(p.kappa_m),
        gamma_b_hz: f(p.gamma_b),
        g_ma_hz: f(p.g_ma),
        temperature: Some(p.temperature),
        ..ConfigFile::default()
    };
    match &p.coupling {
        Coupling::Direct { g_mb_eff } => {
            c.coupling_mode = Some(CouplingMode::Direct);
            c.g_mb_eff_hz = f(*g_mb_eff);
        }
        Coupling::Physical(d) => {
            c.coupling_mode = Some(CouplingMode::Physical);
            c.b0 = Some(d.b0);
            c.g_mb_hz = f(d.g_mb);
            c.sphere_diameter = Some(d.sphere_diameter);
            c.spin_density = Some(d.spin_density);
            c.gyromagnetic_ratio_hz_per_t = f(d.gyromagnetic_ratio);
            c.spin_s = Some(d.spin_s);
            c.kerr_1mm_hz = f(d.kerr_1mm);
        }
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn ov(k: &str, v: Value) -> (String, Value) {
        (k.to_string(), v)
    }

    #[test]
    fn empty_config_gives_defaults() {
        let cfg = load(None, &[]).unwrap().resolve(Some(1)).unwrap();
        assert_eq!(cfg.params, SystemParams::fig2());
        assert!(cfg.sweep.is_none());
    }

    #[test]
    fn overrides_reach_nested_keys() {
        let c = load(None, &[ov("tolerances.kerr", json!(0.5)), ov("temperature", json!(0.2))]).unwrap();
        assert_eq!(c.tolerances.unwrap().kerr, 0.5);
        assert_eq!(c.temperature, Some(0.2));
    }

    #[test]
    fn unknown_key_names_its_path() {
        let err = load(None, &[ov("tolerances.bogus", json!(1))]).unwrap_err();
        assert!(err.to_string().contains("tolerances"), "{err}");
        let err = load(None, &[ov("kapa_a_hz", json!(1))]).unwrap_err();
        assert!(err.to_string().contains("kapa_a_hz"), "{err}");
    }

    #[test]
    fn invalid_parameter_names_config_key() {
        let err = load(None, &[ov("kappa_a_hz", json!(-1.0))])
            .unwrap()
            .resolve(Some(1))
            .unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("kappa_a_hz"), "{err}");
    }

    #[test]
    fn physical_keys_need_physical_mode() {
        let err = load(None, &[ov("b0", json!(1e-5))]).unwrap().resolve(Some(1)).unwrap_err();
        assert!(err.to_string().contains("b0"));
        let cfg = load(None, &[ov("coupling_mode", json!("physical")), ov("b0", json!(1e-5))])
            .unwrap()
            .resolve(Some(1))
            .unwrap();
        assert_eq!(cfg.params.physical_drive().unwrap().b0, 1e-5);
    }

    #[test]
    fn parameter_record_round_trips() {
        let mut p = SystemParams::fig4().with_temperature(0.05);
        p.coupling = Coupling::Physical(PhysicalDrive::fig2());
        let rec = params_record(&p);
        let back = rec.apply_params(SystemParams::fig2()).unwrap();
        assert!((back.kappa_a - p.kappa_a).abs() < 1e-6);
        assert_eq!(back.physical_drive(), p.physical_drive());
        assert_eq!(back.temperature, 0.05);
    }

    #[test]
    fn override_values_parse_as_json_or_string() {
        assert_eq!(parse_override("a=1.5").unwrap(), ("a".into(), json!(1.5)));
        assert_eq!(parse_override("coupling_mode=physical").unwrap().1, json!("physical"));
        assert!(parse_override("novalue").is_err());
    }

    #[test]
    fn sweep_axes_use_table_units() {
        let c: ConfigFile = serde_json::from_value(json!({
            "sweep": {"axes": [{"axis": "delta_a", "min": -2, "max": 2, "points": 5}],
                      "outputs": ["e_ab"]}
        }))
        .unwrap();
        let cfg = c.resolve(Some(1)).unwrap();
        let spec = cfg.sweep.unwrap();
        assert_eq!(spec.axes[0].max, 2.0 * cfg.params.omega_b);
        assert_eq!(spec.outputs, vec![Measure::EAb]);
    }
}
