//! Experiment configuration: a TOML file with an optional operator block
//! and a free-form parameter table, plus typed accessors with defaults.

use std::path::Path;

use lindyn::operators::OperatorModel;
use serde::{Deserialize, Serialize};

#[derive(Debug, Default, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub seed: Option<u64>,
    pub operator: Option<OperatorModel>,
    #[serde(default)]
    pub params: toml::Table,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<ExperimentConfig, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("config {}: {e}", path.display()))
    }

    pub fn u64_or(&self, key: &str, default: u64) -> Result<u64, String> {
        match self.params.get(key) {
            None => Ok(default),
            Some(toml::Value::Integer(i)) if *i >= 0 => Ok(*i as u64),
            Some(v) => Err(format!("param {key}: expected unsigned integer, got {v}")),
        }
    }

    pub fn usize_or(&self, key: &str, default: usize) -> Result<usize, String> {
        Ok(self.u64_or(key, default as u64)? as usize)
    }

    pub fn f64_or(&self, key: &str, default: f64) -> Result<f64, String> {
        match self.params.get(key) {
            None => Ok(default),
            Some(toml::Value::Float(x)) => Ok(*x),
            Some(toml::Value::Integer(i)) => Ok(*i as f64),
            Some(v) => Err(format!("param {key}: expected number, got {v}")),
        }
    }

    pub fn str_or<'a>(&'a self, key: &str, default: &'a str) -> Result<&'a str, String> {
        match self.params.get(key) {
            None => Ok(default),
            Some(toml::Value::String(s)) => Ok(s),
            Some(v) => Err(format!("param {key}: expected string, got {v}")),
        }
    }

    pub fn u64_list_or(&self, key: &str, default: &[u64]) -> Result<Vec<u64>, String> {
        match self.params.get(key) {
            None => Ok(default.to_vec()),
            Some(toml::Value::Array(xs)) => xs
                .iter()
                .map(|v| match v {
                    toml::Value::Integer(i) if *i >= 0 => Ok(*i as u64),
                    _ => Err(format!("param {key}: expected unsigned integers")),
                })
                .collect(),
            Some(v) => Err(format!("param {key}: expected array, got {v}")),
        }
    }

    /// Echo of the effective configuration (seed resolved) for the report.
    pub fn echo(&self, seed: u64) -> serde_json::Value {
        let mut doc = serde_json::to_value(self).expect("config serializes");
        doc["seed"] = serde_json::Value::from(seed);
        doc
    }
}
