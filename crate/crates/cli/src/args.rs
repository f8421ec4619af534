//! Command-line interface definition.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "probcal",
    version,
    about = "Calibration metrics and simulation experiments for win-probability models",
    propagate_version = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute the full metric report for a predictions file (CSV or JSON)
    Eval(EvalArgs),
    /// Expected scores of the optimal model across beta operating conditions
    Case1(Case1Args),
    /// Binned calibration error across bin counts vs the balance reference
    SweepBins(SweepBinsArgs),
    /// Estimator error against the analytic target over growing data sizes
    SweepDatasize(SweepDatasizeArgs),
    /// Train the logistic estimator and evaluate test-set calibration
    TrainEval(TrainEvalArgs),
    /// Expected score of one model under one operating condition
    ExpectedScore(ExpectedScoreArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

/// Flags shared by every subcommand.
#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Base RNG seed (default 42)
    #[arg(long)]
    pub seed: Option<u64>,

    /// Number of equal-width ECE bins (default 10)
    #[arg(long)]
    pub bins: Option<usize>,

    /// Directory for output files
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Stdout format (default json)
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,

    /// TOML config file supplying defaults for any flag
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Predictions file: CSV with `p_hat,outcome` header, or a JSON array
    /// of {"p_hat": .., "outcome": ..} objects (.json extension)
    pub predictions_file: PathBuf,

    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct Case1Args {
    /// Operating conditions, e.g. --dist "beta(0.5,0.5)" --dist uniform
    /// (default: beta(0.5,0.5), beta(1,1), beta(2,2))
    #[arg(long = "dist")]
    pub distributions: Vec<String>,

    /// Samples per condition (default 100000)
    #[arg(long)]
    pub n: Option<usize>,

    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct SweepBinsArgs {
    /// Overconfidence tendencies (default 0.1 and 0.11)
    #[arg(long = "tendency")]
    pub tendencies: Vec<f64>,

    /// Smallest bin count (default 5)
    #[arg(long)]
    pub m_min: Option<usize>,

    /// Largest bin count (default 100)
    #[arg(long)]
    pub m_max: Option<usize>,

    /// Samples per batch (default 10000)
    #[arg(long)]
    pub n: Option<usize>,

    /// Independent replicates (default 20)
    #[arg(long)]
    pub replicates: Option<usize>,

    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct SweepDatasizeArgs {
    /// Overconfidence tendency (default 0.1)
    #[arg(long)]
    pub tendency: Option<f64>,

    /// Smallest data size (default 50)
    #[arg(long)]
    pub size_min: Option<usize>,

    /// Largest data size (default 1000)
    #[arg(long)]
    pub size_max: Option<usize>,

    /// Data size increment (default 50)
    #[arg(long)]
    pub size_step: Option<usize>,

    /// Independent replicates per size (default 100)
    #[arg(long)]
    pub replicates: Option<usize>,

    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct TrainEvalArgs {
    /// Synthetic snapshot profile: early, mid or late
    #[arg(long, conflicts_with = "train_file")]
    pub profile: Option<String>,

    /// Rows to generate in profile mode (default 100000)
    #[arg(long)]
    pub n: Option<usize>,

    /// Train fraction of generated rows (default 0.6)
    #[arg(long)]
    pub train_fraction: Option<f64>,

    /// Training snapshot CSV (file mode; requires --test-file)
    #[arg(long)]
    pub train_file: Option<PathBuf>,

    /// Test snapshot CSV (file mode)
    #[arg(long)]
    pub test_file: Option<PathBuf>,

    /// Gradient-descent learning rate (default 0.1)
    #[arg(long)]
    pub learning_rate: Option<f64>,

    /// Iteration cap (default 10000)
    #[arg(long)]
    pub max_iters: Option<usize>,

    /// Stop when the loss change drops below this (default 1e-10)
    #[arg(long)]
    pub tolerance: Option<f64>,

    /// L2 regularization strength (default 0)
    #[arg(long)]
    pub l2: Option<f64>,

    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct ExpectedScoreArgs {
    /// Scoring rule: accuracy, brier or balance
    #[arg(long)]
    pub rule: String,

    /// Operating condition (default uniform)
    #[arg(long)]
    pub dist: Option<String>,

    /// Response model (default optimal)
    #[arg(long)]
    pub model: Option<String>,

    /// Evaluation method (default quadrature)
    #[arg(long, value_enum)]
    pub method: Option<Method>,

    /// Monte Carlo sample count (default 100000)
    #[arg(long)]
    pub n: Option<usize>,

    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Quadrature,
    Mc,
}
