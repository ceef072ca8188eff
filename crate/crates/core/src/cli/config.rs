//! Experiment configuration.
//!
//! The text format is one `key = value` pair per line. `#` starts a comment,
//! blank lines are ignored and values are unquoted. A JSON object with the
//! same keys is accepted as well; when both are given, JSON keys win.
//!
//! Every key, its default, and the experiments it applies to are listed in
//! `config/reference.conf` next to this crate's manifest.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fermionprobe::ProbeConfig;
use crate::geometry::Grid3;
use crate::monopole::{Loop, MonopoleConfig};

pub const DEFAULT_SEED: u64 = 0xD1AC;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("missing required key `{0}`")]
    MissingKey(String),
    #[error("invalid value `{value}` for `{key}`: {reason}")]
    InvalidValue { key: String, value: String, reason: String },
    #[error("line {line}: expected `key = value`, got `{text}`")]
    Syntax { line: usize, text: String },
    #[error("invalid JSON config: {0}")]
    Json(String),
}

impl ConfigError {
    /// Name of the offending key, when there is one.
    pub fn key(&self) -> Option<&str> {
        match self {
            ConfigError::UnknownKey(k) | ConfigError::MissingKey(k) => Some(k),
            ConfigError::InvalidValue { key, .. } => Some(key),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Charge,
    Monopole,
    Quantize,
    Gamma,
    FermionProbe,
    All,
}

impl Experiment {
    pub const SINGLE: [Experiment; 5] = [
        Experiment::Charge,
        Experiment::Monopole,
        Experiment::Quantize,
        Experiment::Gamma,
        Experiment::FermionProbe,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Charge => "charge",
            Experiment::Monopole => "monopole",
            Experiment::Quantize => "quantize",
            Experiment::Gamma => "gamma",
            Experiment::FermionProbe => "fermion-probe",
            Experiment::All => "all",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Experiment::SINGLE
            .into_iter()
            .chain([Experiment::All])
            .find(|e| e.name() == s)
            .ok_or_else(|| "expected one of charge, monopole, quantize, gamma, fermion-probe, all".to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err("expected json or csv".into()),
        }
    }
}

/// Thresholds behind every pass/fail decision.
#[derive(Debug, Clone, PartialEq)]
pub struct Tolerances {
    pub winding: f64,
    pub conservation: f64,
    pub circulation: f64,
    pub stokes: f64,
    pub flux: f64,
    pub radius: f64,
    pub quantized: f64,
    pub phase: f64,
    pub algebra: f64,
    pub boson_metric: f64,
    pub fermion_min_metric: f64,
    pub fermion_min_ratio: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            winding: 1e-6,
            conservation: 1e-9,
            circulation: 1e-8,
            stokes: 1e-7,
            flux: 1e-8,
            radius: 1e-9,
            quantized: 1e-9,
            phase: 1e-12,
            algebra: 1e-12,
            boson_metric: 1e-12,
            fermion_min_metric: 1e-3,
            fermion_min_ratio: 1e3,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub n: i32,
    pub e: f64,
    pub g: f64,
    pub hbar_c: f64,
    pub n_theta: usize,
    pub n_phi: usize,
    pub radius: f64,
    pub r_in: f64,
    pub r_out: f64,
    pub loop_samples: usize,
    pub loop_thetas: Vec<f64>,
    pub flux_radii: Vec<f64>,
    pub grid: usize,
    pub half_width: f64,
    pub r_cut: f64,
    pub rho_cut: f64,
    pub k: f64,
    pub loop_radius: f64,
    pub probe_samples: usize,
    pub gamma_samples: usize,
    pub gamma_bound: f64,
    pub similarity_samples: usize,
    pub seed: u64,
    pub require_quantized: bool,
    pub tolerances: Tolerances,
    pub output: Option<PathBuf>,
    pub format: Format,
}

impl ExperimentConfig {
    /// Defaults for everything except the experiment-specific required keys.
    pub fn defaults(experiment: Experiment) -> Self {
        Self {
            experiment,
            n: 1,
            e: 1.0,
            g: 0.5,
            hbar_c: 1.0,
            n_theta: 64,
            n_phi: 128,
            radius: 1.0,
            r_in: 0.5,
            r_out: 2.0,
            loop_samples: 256,
            loop_thetas: vec![PI / 6.0, PI / 4.0, PI / 2.0, 3.0 * PI / 4.0],
            flux_radii: vec![0.5, 1.0, 10.0],
            grid: 16,
            half_width: 2.0,
            r_cut: 0.5,
            rho_cut: 0.2,
            k: 1.0,
            loop_radius: 3.0,
            probe_samples: 64,
            gamma_samples: 10_000,
            gamma_bound: 10.0,
            similarity_samples: 100,
            seed: DEFAULT_SEED,
            require_quantized: false,
            tolerances: Tolerances::default(),
            output: None,
            format: Format::Json,
        }
    }

    pub fn monopole(&self) -> Result<MonopoleConfig, crate::Error> {
        MonopoleConfig::new(self.g, self.e, self.hbar_c)
    }

    pub fn probe(&self) -> Result<ProbeConfig, crate::Error> {
        let mut probe = ProbeConfig::new(self.monopole()?)?;
        probe.k = self.k;
        probe.grid = Grid3::centered_cube(self.half_width, self.grid)?;
        probe.r_cut = self.r_cut;
        probe.rho_cut = self.rho_cut;
        probe.probe_loop = Loop::new(self.loop_radius, PI / 2.0, self.probe_samples)?;
        probe.validate()?;
        Ok(probe)
    }
}

/// Keys whose absence is an error, per experiment.
fn required_keys(experiment: Experiment) -> &'static [&'static str] {
    match experiment {
        Experiment::Charge => &["n"],
        Experiment::Monopole | Experiment::Quantize => &["g"],
        Experiment::Gamma | Experiment::FermionProbe | Experiment::All => &[],
    }
}

const KEYS: &[&str] = &[
    "experiment", "n", "e", "g", "hbar_c", "n_theta", "n_phi", "radius", "r_in", "r_out",
    "loop_samples", "loop_thetas", "flux_radii", "grid", "half_width", "r_cut", "rho_cut", "k",
    "loop_radius", "probe_samples", "gamma_samples", "gamma_bound", "similarity_samples", "seed",
    "require_quantized", "output", "format", "tol_winding", "tol_conservation", "tol_circulation",
    "tol_stokes", "tol_flux", "tol_radius", "tol_quantized", "tol_phase", "tol_algebra",
    "tol_boson_metric", "fermion_min_metric", "fermion_min_ratio",
];

/// Splits `key = value` text into a map. Later duplicates win.
pub fn parse_key_values(text: &str) -> Result<BTreeMap<String, String>, ConfigError> {
    let mut map = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::Syntax {
            line: idx + 1,
            text: raw.to_string(),
        })?;
        let key = key.trim();
        if key.is_empty() {
            return Err(ConfigError::Syntax { line: idx + 1, text: raw.to_string() });
        }
        map.insert(key.to_string(), value.trim().to_string());
    }
    Ok(map)
}

/// Flattens a JSON object into the same string map as [`parse_key_values`].
pub fn parse_json_map(text: &str) -> Result<BTreeMap<String, String>, ConfigError> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| ConfigError::Json(e.to_string()))?;
    let obj = value
        .as_object()
        .ok_or_else(|| ConfigError::Json("top level must be an object".into()))?;
    obj.iter()
        .map(|(k, v)| {
            let s = match v {
                serde_json::Value::String(s) => s.clone(),
                serde_json::Value::Array(items) => items
                    .iter()
                    .map(|i| match i {
                        serde_json::Value::String(s) => s.clone(),
                        other => other.to_string(),
                    })
                    .collect::<Vec<_>>()
                    .join(","),
                other => other.to_string(),
            };
            Ok((k.clone(), s))
        })
        .collect()
}

/// Parses either format; text whose first non-blank character is `{` is JSON.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    let map = if text.trim_start().starts_with('{') {
        parse_json_map(text)?
    } else {
        parse_key_values(text)?
    };
    from_map(&map)
}

fn invalid(key: &str, value: &str, reason: impl Into<String>) -> ConfigError {
    ConfigError::InvalidValue { key: key.into(), value: value.into(), reason: reason.into() }
}

fn number<T: FromStr>(key: &str, value: &str) -> Result<T, ConfigError> {
    value.parse().map_err(|_| invalid(key, value, "not a number"))
}

fn positive(key: &str, value: &str) -> Result<f64, ConfigError> {
    let v: f64 = number(key, value)?;
    if !(v > 0.0 && v.is_finite()) {
        return Err(invalid(key, value, "must be positive"));
    }
    Ok(v)
}

fn count(key: &str, value: &str, min: usize) -> Result<usize, ConfigError> {
    let v: usize = number(key, value)?;
    if v < min {
        return Err(invalid(key, value, format!("must be >= {min}")));
    }
    Ok(v)
}

fn list(key: &str, value: &str) -> Result<Vec<f64>, ConfigError> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| number::<f64>(key, s))
        .collect()
}

pub fn parse_seed(value: &str) -> Option<u64> {
    match value.strip_prefix("0x").or_else(|| value.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16).ok(),
        None => value.parse().ok(),
    }
}

/// Validates a key map and fills defaults.
pub fn from_map(map: &BTreeMap<String, String>) -> Result<ExperimentConfig, ConfigError> {
    if let Some(unknown) = map.keys().find(|k| !KEYS.contains(&k.as_str())) {
        return Err(ConfigError::UnknownKey(unknown.clone()));
    }
    let exp_text = map.get("experiment").ok_or_else(|| ConfigError::MissingKey("experiment".into()))?;
    let experiment: Experiment = exp_text.parse().map_err(|r: String| invalid("experiment", exp_text, r))?;
    for key in required_keys(experiment) {
        if !map.contains_key(*key) {
            return Err(ConfigError::MissingKey((*key).into()));
        }
    }

    let mut c = ExperimentConfig::defaults(experiment);
    for (key, value) in map {
        let (k, v) = (key.as_str(), value.as_str());
        let t = &mut c.tolerances;
        match k {
            "experiment" => {}
            "n" => c.n = number(k, v)?,
            "e" => {
                c.e = number(k, v)?;
                if c.e == 0.0 || !c.e.is_finite() {
                    return Err(invalid(k, v, "must be finite and nonzero"));
                }
            }
            "g" => {
                c.g = number(k, v)?;
                if !c.g.is_finite() {
                    return Err(invalid(k, v, "must be finite"));
                }
            }
            "hbar_c" => c.hbar_c = positive(k, v)?,
            "n_theta" => c.n_theta = count(k, v, 1)?,
            "n_phi" => c.n_phi = count(k, v, 1)?,
            "radius" => c.radius = positive(k, v)?,
            "r_in" => c.r_in = positive(k, v)?,
            "r_out" => c.r_out = positive(k, v)?,
            "loop_samples" => c.loop_samples = count(k, v, 1)?,
            "loop_thetas" => {
                c.loop_thetas = list(k, v)?;
                if c.loop_thetas.iter().any(|t| !(0.0..PI).contains(t)) {
                    return Err(invalid(k, v, "colatitudes must lie in [0, pi)"));
                }
            }
            "flux_radii" => {
                c.flux_radii = list(k, v)?;
                if c.flux_radii.is_empty() || c.flux_radii.iter().any(|r| !(*r > 0.0)) {
                    return Err(invalid(k, v, "need at least one positive radius"));
                }
            }
            "grid" => c.grid = count(k, v, 2)?,
            "half_width" => c.half_width = positive(k, v)?,
            "r_cut" => c.r_cut = positive(k, v)?,
            "rho_cut" => c.rho_cut = positive(k, v)?,
            "k" => c.k = positive(k, v)?,
            "loop_radius" => c.loop_radius = positive(k, v)?,
            "probe_samples" => c.probe_samples = count(k, v, crate::fermionprobe::MIN_SAMPLES)?,
            "gamma_samples" => c.gamma_samples = count(k, v, 1)?,
            "gamma_bound" => c.gamma_bound = positive(k, v)?,
            "similarity_samples" => c.similarity_samples = count(k, v, 1)?,
            "seed" => c.seed = parse_seed(v).ok_or_else(|| invalid(k, v, "not an integer"))?,
            "require_quantized" => {
                c.require_quantized = v.parse().map_err(|_| invalid(k, v, "expected true or false"))?
            }
            "output" => c.output = Some(PathBuf::from(v)),
            "format" => c.format = v.parse().map_err(|r: String| invalid(k, v, r))?,
            "tol_winding" => t.winding = positive(k, v)?,
            "tol_conservation" => t.conservation = positive(k, v)?,
            "tol_circulation" => t.circulation = positive(k, v)?,
            "tol_stokes" => t.stokes = positive(k, v)?,
            "tol_flux" => t.flux = positive(k, v)?,
            "tol_radius" => t.radius = positive(k, v)?,
            "tol_quantized" => t.quantized = positive(k, v)?,
            "tol_phase" => t.phase = positive(k, v)?,
            "tol_algebra" => t.algebra = positive(k, v)?,
            "tol_boson_metric" => t.boson_metric = positive(k, v)?,
            "fermion_min_metric" => t.fermion_min_metric = positive(k, v)?,
            "fermion_min_ratio" => t.fermion_min_ratio = positive(k, v)?,
            _ => unreachable!("key list checked above"),
        }
    }
    if c.r_in >= c.r_out {
        return Err(invalid("r_in", &c.r_in.to_string(), "must be smaller than r_out"));
    }
    if matches!(experiment, Experiment::FermionProbe | Experiment::All) {
        c.probe().map_err(|e| invalid("loop_radius", &c.loop_radius.to_string(), e.to_string()))?;
    }
    Ok(c)
}
