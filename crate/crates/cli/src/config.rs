//! JSON run configuration.
//!
//! The file carries the same knobs as the command line flags plus the list
//! valued sweep grids. Any flag given on the command line overrides the
//! file value; unknown keys are rejected so typos surface instead of
//! silently falling back to defaults.

use std::path::Path;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    pub mu: Option<f64>,
    pub power: Option<f64>,
    pub noise: Option<f64>,
    pub eve_noise: Option<f64>,
    pub h: Option<String>,
    pub grid: Option<String>,
    pub iters: Option<usize>,
    pub restarts: Option<usize>,
    pub seed: Option<u64>,
    pub convention: Option<String>,
    pub out: Option<String>,
    pub format: Option<String>,
    pub n: Option<Vec<usize>>,
    pub delta: Option<f64>,
    pub trials: Option<usize>,
    pub mode: Option<String>,
    pub mu_grid: Option<Vec<f64>>,
    pub power_grid: Option<Vec<f64>>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<FileConfig, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config file {}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("config file {}: {e}", path.display()))
    }
}
