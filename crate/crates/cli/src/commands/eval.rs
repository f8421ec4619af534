//! `probcal eval`: full metric report over a predictions file.

use std::fs::File;
use std::path::Path;

use anyhow::Context;
use probcal::{compute_bins, full_report, PredictionSet};

use crate::args::{EvalArgs, OutputFormat};
use crate::commands::{load_config, stdout_format};
use crate::config::resolve;
use crate::report::{bins_to_csv, metric_report_csv, write_out};
use crate::DEFAULT_BINS;

pub fn run(args: EvalArgs) -> anyhow::Result<()> {
    let config = load_config(&args.common)?;
    let bins = resolve(args.common.bins, config.bins, DEFAULT_BINS);

    let preds = read_predictions(&args.predictions_file)?;
    let report = full_report(&preds, bins)?;
    let bin_stats = compute_bins(&preds, bins)?;

    match stdout_format(&args.common) {
        OutputFormat::Json => {
            println!("{}", serde_json::to_string_pretty(&report)?);
        }
        OutputFormat::Csv => {
            print!("{}", metric_report_csv(&report)?);
        }
    }

    if let Some(dir) = args.common.out.as_deref().or(config.out.as_deref()) {
        let mut json = serde_json::to_string_pretty(&report)?;
        json.push('\n');
        write_out(dir, "report.json", &json)?;
        write_out(dir, "bins.csv", &bins_to_csv(&bin_stats)?)?;
    }
    Ok(())
}

/// Reads predictions from CSV, or JSON when the file uses a `.json`
/// extension.
pub fn read_predictions(path: &Path) -> anyhow::Result<PredictionSet> {
    let file = File::open(path)
        .with_context(|| format!("cannot open predictions file `{}`", path.display()))?;
    let is_json = path
        .extension()
        .map(|e| e.eq_ignore_ascii_case("json"))
        .unwrap_or(false);
    let preds = if is_json {
        PredictionSet::from_json_reader(file)
    } else {
        PredictionSet::from_csv_reader(file)
    }
    .with_context(|| format!("cannot parse predictions file `{}`", path.display()))?;
    Ok(preds)
}
