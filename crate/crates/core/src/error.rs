//! Crate-wide error type.

use thiserror::Error;

/// Errors raised by metric computation, simulation and training.
#[derive(Debug, Error)]
pub enum Error {
    #[error("empty prediction set")]
    EmptyPredictionSet,

    #[error("p_hat must be a finite probability in [0, 1], got {0}")]
    InvalidProbability(f64),

    #[error("outcome must be 0 or 1, got {0}")]
    InvalidOutcome(i64),

    #[error("invalid prediction at data row {row}: {reason}")]
    InvalidPredictionRow { row: usize, reason: String },

    #[error("bin count must be at least 1")]
    InvalidBinCount,

    #[error("beta parameters must be finite and positive, got alpha={alpha}, beta={beta}")]
    InvalidBetaParams { alpha: f64, beta: f64 },

    #[error("tendency must lie in [-1, 1], got {0}")]
    InvalidTendency(f64),

    #[error("sample count must be at least {min}, got {got}")]
    InvalidSampleCount { min: usize, got: usize },

    #[error("quadrature spec requires at least {min} initial nodes, got {got}")]
    InvalidQuadratureSpec { min: usize, got: usize },

    #[error(
        "quadrature did not converge: last refinement changed the estimate by {delta:.3e} \
         (tolerance {tol:.3e}) at {nodes} nodes"
    )]
    QuadratureDidNotConverge { delta: f64, tol: f64, nodes: usize },

    #[error("conditional frequency undefined for non-monotone model map")]
    NonMonotoneModel,

    #[error("expected {expected} feature columns, found {found}")]
    FeatureDimensionMismatch { expected: usize, found: usize },

    #[error("invalid outcome label at data row {row}: {value}")]
    InvalidLabel { row: usize, value: String },

    #[error("non-finite value at data row {row}, column `{column}`")]
    NonFiniteValue { row: usize, column: String },

    #[error("non-finite feature value for `{0}`")]
    NonFiniteFeature(String),

    #[error("training data must contain both outcome classes")]
    SingleClassData,

    #[error(
        "training diverged: loss increased for {0} consecutive iterations; \
         try a smaller learning rate"
    )]
    TrainingDiverged(usize),

    #[error("invalid train config: {0}")]
    InvalidTrainConfig(String),

    #[error("degenerate split: train fraction {fraction} leaves an empty partition for n={n}")]
    DegenerateSplit { fraction: f64, n: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
