//! Library side of the `probcal` command-line harness.

use std::fmt;

pub mod args;
pub mod commands;
pub mod config;
pub mod report;

pub use args::{Cli, Command};

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_BINS: usize = 10;

/// A contract violation on the user's side (bad flags, malformed input).
/// Maps to exit code 2; anything else non-I/O is treated as internal.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(UsageError(msg.into()))
}

pub fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Eval(args) => commands::eval::run(args),
        Command::Case1(args) => commands::case1::run(args),
        Command::SweepBins(args) => commands::sweep_bins::run(args),
        Command::SweepDatasize(args) => commands::sweep_datasize::run(args),
        Command::TrainEval(args) => commands::train_eval::run(args),
        Command::ExpectedScore(args) => commands::expected_score::run(args),
    }
}

/// Exit code classification: 2 for input/contract problems, 1 for internal
/// failures such as quadrature non-convergence.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    for cause in err.chain() {
        if let Some(core_err) = cause.downcast_ref::<probcal::Error>() {
            return match core_err {
                probcal::Error::QuadratureDidNotConverge { .. } => 1,
                _ => 2,
            };
        }
        if cause.downcast_ref::<UsageError>().is_some()
            || cause.downcast_ref::<std::io::Error>().is_some()
            || cause.downcast_ref::<toml::de::Error>().is_some()
        {
            return 2;
        }
    }
    1
}
