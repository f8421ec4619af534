pub mod case1;
pub mod eval;
pub mod expected_score;
pub mod sweep_bins;
pub mod sweep_datasize;
pub mod train_eval;

use std::path::Path;

use crate::args::{CommonArgs, OutputFormat};
use crate::config::ExperimentConfig;

/// Loads the config file named by `--config`, or an empty one.
pub(crate) fn load_config(common: &CommonArgs) -> anyhow::Result<ExperimentConfig> {
    match &common.config {
        Some(path) => ExperimentConfig::load(Path::new(path)),
        None => Ok(ExperimentConfig::default()),
    }
}

pub(crate) fn stdout_format(common: &CommonArgs) -> OutputFormat {
    common.format.unwrap_or(OutputFormat::Json)
}
