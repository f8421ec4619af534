//! Report documents: the JSON/CSV artifacts every experiment emits.
//!
//! Output is deterministic byte-for-byte given identical flags and seed:
//! maps are ordered, floats print in shortest round-trip form and provenance
//! carries no wall-clock fields.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use probcal::{BinStats, MetricReport};
use serde::{Deserialize, Serialize};

pub const TOOL_NAME: &str = "probcal";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Where every number in a report came from: the experiment inputs plus the
/// derived per-condition seeds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    pub base_seed: u64,
    /// Effective experiment parameters, including defaults that applied.
    pub params: BTreeMap<String, String>,
}

impl Provenance {
    pub fn new(base_seed: u64) -> Self {
        Self {
            tool: TOOL_NAME.into(),
            version: TOOL_VERSION.into(),
            base_seed,
            params: BTreeMap::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.into(), value.to_string());
        self
    }
}

/// Quadrature reference values set alongside a Monte Carlo row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceValues {
    pub method: String,
    pub accuracy: f64,
    pub brier: f64,
    pub balance: f64,
    pub true_ece: f64,
}

/// One experimental condition with its metrics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionRow {
    pub condition: String,
    pub seed: u64,
    pub report: MetricReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference: Option<ReferenceValues>,
    /// Mean |p_hat - true_p| against the generator's hidden truth, when the
    /// dataset carries one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_true_ece: Option<f64>,
}

/// A named (x, y) series, e.g. a histogram or a sweep curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Series {
    pub name: String,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

/// Top-level experiment artifact.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub experiment: String,
    pub provenance: Provenance,
    pub rows: Vec<ConditionRow>,
    pub series: Vec<Series>,
}

impl ReportDocument {
    pub fn to_json_string(&self) -> anyhow::Result<String> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        Ok(text)
    }

    pub fn write_json(&self, path: &Path) -> anyhow::Result<()> {
        fs::write(path, self.to_json_string()?)?;
        Ok(())
    }

    /// Fixed-order CSV of the metric rows; optional cells are left empty.
    /// Columns: condition, seed, n, accuracy, brier, brier_calibration,
    /// brier_sharpness, ece, ece_bins, balance, ref_accuracy, ref_brier,
    /// ref_balance, ref_true_ece, oracle_true_ece.
    pub fn rows_to_csv(&self) -> anyhow::Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "condition",
            "seed",
            "n",
            "accuracy",
            "brier",
            "brier_calibration",
            "brier_sharpness",
            "ece",
            "ece_bins",
            "balance",
            "ref_accuracy",
            "ref_brier",
            "ref_balance",
            "ref_true_ece",
            "oracle_true_ece",
        ])?;
        for row in &self.rows {
            let r = &row.report;
            let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
            w.write_record(&[
                row.condition.clone(),
                row.seed.to_string(),
                r.n.to_string(),
                r.accuracy.to_string(),
                r.brier.to_string(),
                r.brier_decomposition.calibration_term.to_string(),
                r.brier_decomposition.sharpness_term.to_string(),
                r.ece.to_string(),
                r.ece_bins.to_string(),
                r.balance.to_string(),
                opt(row.reference.as_ref().map(|q| q.accuracy)),
                opt(row.reference.as_ref().map(|q| q.brier)),
                opt(row.reference.as_ref().map(|q| q.balance)),
                opt(row.reference.as_ref().map(|q| q.true_ece)),
                opt(row.oracle_true_ece),
            ])?;
        }
        Ok(String::from_utf8(w.into_inner()?)?)
    }

    /// Fixed-order CSV of all series: series, x, y.
    pub fn series_to_csv(&self) -> anyhow::Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["series", "x", "y"])?;
        for s in &self.series {
            for (x, y) in s.x.iter().zip(&s.y) {
                w.write_record(&[s.name.clone(), x.to_string(), y.to_string()])?;
            }
        }
        Ok(String::from_utf8(w.into_inner()?)?)
    }
}

/// Bin statistics CSV, one bin per row. Columns: bin_index, lower, upper,
/// count, mean_outcome, mean_p_hat, gap, empty.
pub fn bins_to_csv(bins: &[BinStats]) -> anyhow::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "bin_index",
        "lower",
        "upper",
        "count",
        "mean_outcome",
        "mean_p_hat",
        "gap",
        "empty",
    ])?;
    let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    for b in bins {
        w.write_record(&[
            b.bin_index.to_string(),
            b.lower.to_string(),
            b.upper.to_string(),
            b.count.to_string(),
            opt(b.mean_outcome),
            opt(b.mean_p_hat),
            opt(b.gap),
            b.is_empty().to_string(),
        ])?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

/// Histogram bin count for distribution plots.
pub const HISTOGRAM_BINS: usize = 50;

/// Equal-width histogram over [0, 1]; x holds bin centers, y holds counts.
pub fn histogram(name: impl Into<String>, values: &[f64], bins: usize) -> Series {
    let mut counts = vec![0usize; bins];
    for v in values {
        let idx = ((v * bins as f64) as usize).min(bins - 1);
        counts[idx] += 1;
    }
    Series {
        name: name.into(),
        x: (0..bins).map(|i| (i as f64 + 0.5) / bins as f64).collect(),
        y: counts.into_iter().map(|c| c as f64).collect(),
    }
}

/// Creates the output directory and writes a file into it.
pub fn write_out(dir: &Path, name: &str, contents: &str) -> anyhow::Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    let mut file = fs::File::create(&path)?;
    file.write_all(contents.as_bytes())?;
    Ok(path)
}

/// Metric report CSV used by `eval --format csv` (single row, fixed order).
pub fn metric_report_csv(report: &MetricReport) -> anyhow::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "accuracy",
        "brier",
        "brier_calibration",
        "brier_sharpness",
        "ece",
        "ece_bins",
        "balance",
        "n",
    ])?;
    w.write_record(&[
        report.accuracy.to_string(),
        report.brier.to_string(),
        report.brier_decomposition.calibration_term.to_string(),
        report.brier_decomposition.sharpness_term.to_string(),
        report.ece.to_string(),
        report.ece_bins.to_string(),
        report.balance.to_string(),
        report.n.to_string(),
    ])?;
    Ok(String::from_utf8(w.into_inner()?)?)
}
