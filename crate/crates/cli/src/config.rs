use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Deserialize;

/// Experiment file. Matrix paths are relative to the file's directory.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub reference: PathBuf,
    #[serde(default)]
    pub alternatives: Vec<PathBuf>,
    pub epsilon: f64,
    pub delta: f64,
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default)]
    pub n_grid: Option<Vec<usize>>,
    pub trials: u64,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub tester: Option<String>,
    /// Start every trajectory here instead of at stationarity.
    #[serde(default)]
    pub initial_state: Option<usize>,
    #[serde(default = "default_max_denominator")]
    pub max_denominator: u64,
}

fn default_max_denominator() -> u64 {
    10_000
}

impl ExperimentConfig {
    pub fn read(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }
}
