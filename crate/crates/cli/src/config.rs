//! Experiment configuration file (TOML key-value document).
//!
//! Every field is optional; command-line flags override config values, and
//! built-in defaults fill whatever remains. Serialization skips unset fields
//! so a config round-trips losslessly through its file form.

use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub experiment: Option<String>,
    /// Operating conditions, e.g. `["beta(0.5,0.5)", "uniform"]`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distributions: Option<Vec<String>>,
    /// Response models, e.g. `["optimal", "biased:0.1"]`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub models: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub replicates: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bins: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bin_min: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bin_max: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub size_min: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub size_max: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub size_step: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub profile: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub train_fraction: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub learning_rate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_iters: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l2: Option<f64>,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config `{}`", path.display()))?;
        let cfg = toml::from_str(&text)
            .with_context(|| format!("cannot parse config `{}`", path.display()))?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> anyhow::Result<String> {
        Ok(toml::to_string(self)?)
    }
}

/// CLI flag wins, then config, then the built-in default.
pub fn resolve<T>(flag: Option<T>, config: Option<T>, default: T) -> T {
    flag.or(config).unwrap_or(default)
}

/// Same priority chain for values that may stay absent.
pub fn resolve_opt<T>(flag: Option<T>, config: Option<T>) -> Option<T> {
    flag.or(config)
}
