//! Calibration metrics and simulation tools for binary probability
//! estimators.
//!
//! The crate covers four layers:
//!
//! - [`metrics`]: accuracy, Brier score (with its calibration/sharpness
//!   decomposition), binned expected calibration error and the gain/loss
//!   Balance score over [`prediction::PredictionSet`]s.
//! - [`batch`] with [`distribution`] and [`model`]: seeded generation of
//!   scored batches whose ground-truth probabilities are known, under
//!   beta-family operating conditions and optimal or confidence-biased
//!   response models.
//! - [`expected`]: the oracle layer — closed-form, quadrature and Monte
//!   Carlo expected scores, plus the analytic true expected calibration
//!   error of a deterministic model map.
//! - [`trainer`]: snapshot datasets, a synthetic snapshot generator with
//!   known truth, and a from-scratch logistic-regression estimator.
//!
//! All randomized operations take explicit `u64` seeds and produce bitwise
//! identical results across runs and thread counts; see [`rng::derive_seed`]
//! for how sweeps derive per-replicate seeds.

pub mod batch;
pub mod distribution;
pub mod error;
pub mod expected;
pub mod metrics;
pub mod model;
pub mod prediction;
pub mod quadrature;
pub mod rng;
pub mod scoring;
mod sum;
pub mod trainer;

pub use batch::{generate_batch, sample_probs, ScoredBatch};
pub use distribution::ProbDistribution;
pub use error::{Error, Result};
pub use expected::{
    expected_score_mc, expected_score_quadrature, pointwise_expected, true_ece_analytic, McEstimate,
};
pub use metrics::{
    compute_bins, decompose_brier, full_report, score_accuracy, score_balance, score_brier,
    score_ece, score_mce, BinStats, BrierDecomposition, MetricReport,
};
pub use model::SyntheticModel;
pub use prediction::{Prediction, PredictionSet};
pub use quadrature::QuadratureSpec;
pub use rng::derive_seed;
pub use scoring::ScoringRule;
