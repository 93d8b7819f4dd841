//! Resolved parameter sets. Precedence: command-line flags, then the JSON config file,
//! then the defaults below. The resolved struct is what the manifest records.

use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{CliError, CliResult};

pub const SUBCOMMANDS: [&str; 6] = ["evolve", "tdhf", "prep", "shadows", "cost", "experiment"];

/// Parameter keys that name files the run writes.
pub const OUTPUT_KEYS: [&str; 5] = ["out", "summary", "ledger_out", "samples_out", "report"];

fn as_object(v: Value, what: &str) -> CliResult<Map<String, Value>> {
    match v {
        Value::Object(m) => Ok(m),
        Value::Null => Ok(Map::new()),
        other => Err(CliError::usage(format!("{what} must be a JSON object, got {other}"))),
    }
}

/// The part of a config file that applies to `subcommand`. A file whose top-level keys
/// include any subcommand name is sectioned; otherwise it applies as a whole.
pub fn config_section(config: &Value, subcommand: &str) -> CliResult<Map<String, Value>> {
    let map = as_object(config.clone(), "config file")?;
    if map.keys().any(|k| SUBCOMMANDS.contains(&k.as_str())) {
        match map.get(subcommand) {
            Some(v) => as_object(v.clone(), &format!("config section `{subcommand}`")),
            None => Ok(Map::new()),
        }
    } else {
        Ok(map)
    }
}

pub fn resolve<R: DeserializeOwned>(subcommand: &str, config: Option<&Value>, flags: &impl Serialize) -> CliResult<R> {
    let mut merged = match config {
        Some(c) => config_section(c, subcommand)?,
        None => Map::new(),
    };
    for (k, v) in as_object(serde_json::to_value(flags)?, "flags")? {
        merged.insert(k, v);
    }
    serde_json::from_value(Value::Object(merged)).map_err(|e| CliError::usage(format!("{subcommand}: {e}")))
}

/// Rewrites every output path to `dir/<file name>`.
pub fn redirect_outputs(params: &mut Value, dir: &Path) {
    if let Value::Object(map) = params {
        for key in OUTPUT_KEYS {
            if let Some(Value::String(p)) = map.get(key) {
                let name = Path::new(p).file_name().map(PathBuf::from).unwrap_or_else(|| PathBuf::from(p));
                map.insert(key.to_string(), Value::String(dir.join(name).to_string_lossy().into_owned()));
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvolveParams {
    pub dim: Option<usize>,
    pub points: Option<usize>,
    pub omega: Option<f64>,
    pub nuclei: Option<PathBuf>,
    pub soften: Option<f64>,
    pub eta: usize,
    pub time: f64,
    pub steps: usize,
    pub order: u32,
    pub seed: u64,
    #[serde(rename = "in")]
    pub input: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub summary: Option<PathBuf>,
}

impl Default for EvolveParams {
    fn default() -> Self {
        EvolveParams {
            dim: None,
            points: None,
            omega: None,
            nuclei: None,
            soften: None,
            eta: 2,
            time: 1.0,
            steps: 100,
            order: 2,
            seed: 0,
            input: None,
            out: None,
            summary: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TdhfParams {
    pub dim: Option<usize>,
    pub points: Option<usize>,
    pub omega: Option<f64>,
    pub nuclei: Option<PathBuf>,
    pub soften: Option<f64>,
    pub eta: Option<usize>,
    pub coeffs: Option<PathBuf>,
    pub time: f64,
    pub steps: usize,
    pub scheme: String,
    pub observables: String,
    pub out: Option<PathBuf>,
}

impl Default for TdhfParams {
    fn default() -> Self {
        TdhfParams {
            dim: None,
            points: None,
            omega: None,
            nuclei: None,
            soften: None,
            eta: None,
            coeffs: None,
            time: 1.0,
            steps: 1000,
            scheme: "midpoint".into(),
            observables: "energy".into(),
            out: None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PrepParams {
    pub dim: Option<usize>,
    pub points: Option<usize>,
    pub omega: Option<f64>,
    pub coeffs: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub verify: bool,
    pub ledger_out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ShadowsParams {
    #[serde(rename = "in")]
    pub input: Option<PathBuf>,
    pub k: usize,
    pub epsilon: f64,
    pub delta: f64,
    pub samples: String,
    pub seed: u64,
    pub elements: String,
    pub out: Option<PathBuf>,
    pub samples_out: Option<PathBuf>,
}

impl Default for ShadowsParams {
    fn default() -> Self {
        ShadowsParams {
            input: None,
            k: 1,
            epsilon: 0.1,
            delta: 0.05,
            samples: "auto".into(),
            seed: 0,
            elements: "all-1rdm".into(),
            out: None,
            samples_out: None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CostParams {
    pub alpha_range: Option<String>,
    pub query: Option<String>,
    pub out: Option<PathBuf>,
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentParams {
    pub dim: Option<usize>,
    pub points: Option<usize>,
    pub omega: Option<f64>,
    pub nuclei: Option<PathBuf>,
    pub soften: Option<f64>,
    pub coeffs: Option<PathBuf>,
    pub eta: Option<usize>,
    pub time: f64,
    pub steps: usize,
    pub order: u32,
    pub k: usize,
    pub epsilon: f64,
    pub delta: f64,
    pub samples: String,
    pub seed: u64,
    pub elements: String,
    pub out: Option<PathBuf>,
    pub report: Option<PathBuf>,
}

impl Default for ExperimentParams {
    fn default() -> Self {
        ExperimentParams {
            dim: None,
            points: None,
            omega: None,
            nuclei: None,
            soften: None,
            coeffs: None,
            eta: None,
            time: 0.0,
            steps: 1,
            order: 2,
            k: 1,
            epsilon: 0.1,
            delta: 0.05,
            samples: "auto".into(),
            seed: 0,
            elements: "all-1rdm".into(),
            out: None,
            report: None,
        }
    }
}
