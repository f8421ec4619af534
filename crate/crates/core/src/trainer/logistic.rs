//! From-scratch logistic regression: standardization, full-batch gradient
//! descent on the mean binary cross-entropy, and prediction.

use std::io;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::prediction::{Prediction, PredictionSet};
use crate::sum::CompensatedSum;
use crate::trainer::dataset::{SnapshotDataset, FEATURE_COUNT};

/// Per-feature location/scale computed on the training split only.
/// Zero-variance columns are dropped (recorded in `dropped`) and contribute
/// nothing to the model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StandardizationStats {
    pub means: Vec<f64>,
    pub stds: Vec<f64>,
    pub dropped: Vec<usize>,
}

impl StandardizationStats {
    pub fn fit(ds: &SnapshotDataset) -> Self {
        let n = ds.len() as f64;
        let mut means = Vec::with_capacity(FEATURE_COUNT);
        let mut stds = Vec::with_capacity(FEATURE_COUNT);
        let mut dropped = Vec::new();
        for j in 0..FEATURE_COUNT {
            let mean = {
                let mut acc = CompensatedSum::new();
                for i in 0..ds.len() {
                    acc.add(ds.row(i)[j]);
                }
                acc.total() / n
            };
            let variance = {
                let mut acc = CompensatedSum::new();
                for i in 0..ds.len() {
                    let d = ds.row(i)[j] - mean;
                    acc.add(d * d);
                }
                acc.total() / n
            };
            let std = variance.sqrt();
            means.push(mean);
            if std <= 1e-12 * mean.abs().max(1.0) {
                dropped.push(j);
                stds.push(1.0);
            } else {
                stds.push(std);
            }
        }
        Self {
            means,
            stds,
            dropped,
        }
    }

    /// Standardizes one raw feature row; dropped columns map to 0.
    pub fn apply(&self, raw: &[f64], out: &mut [f64]) {
        for j in 0..FEATURE_COUNT {
            out[j] = if self.dropped.contains(&j) {
                0.0
            } else {
                (raw[j] - self.means[j]) / self.stds[j]
            };
        }
    }
}

/// Optimizer settings for [`train`].
///
/// `seed` is carried for interface stability; the deterministic full-batch
/// optimizer with zero initialization does not consume randomness.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub max_iters: usize,
    /// Stop once the absolute change in loss falls below this.
    pub tolerance: f64,
    /// Optional L2 strength; 0 disables regularization.
    pub l2: f64,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            learning_rate: 0.1,
            max_iters: 10_000,
            tolerance: 1e-10,
            l2: 0.0,
            seed: 0,
        }
    }
}

impl TrainConfig {
    fn validate(&self) -> Result<()> {
        if !(self.learning_rate.is_finite() && self.learning_rate > 0.0) {
            return Err(Error::InvalidTrainConfig(format!(
                "learning_rate must be positive, got {}",
                self.learning_rate
            )));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidTrainConfig(
                "max_iters must be positive".into(),
            ));
        }
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return Err(Error::InvalidTrainConfig(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        if !(self.l2.is_finite() && self.l2 >= 0.0) {
            return Err(Error::InvalidTrainConfig(format!(
                "l2 must be non-negative, got {}",
                self.l2
            )));
        }
        Ok(())
    }
}

/// Outcome of a training run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingMeta {
    pub iterations: usize,
    pub final_loss: f64,
    pub converged: bool,
    /// Loss at every evaluated iterate; in-memory only.
    #[serde(skip)]
    pub loss_trace: Vec<f64>,
}

/// Trained probability estimator: weights on the standardized scale plus
/// the standardization that produced them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogisticModel {
    pub weights: Vec<f64>,
    pub bias: f64,
    pub standardization: StandardizationStats,
    pub config: TrainConfig,
    pub meta: TrainingMeta,
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// Sigmoid and binary cross-entropy of logit `z` against label `y` from one
/// shared `exp`, using the overflow-free form
/// `max(z, 0) - z*y + ln(1 + exp(-|z|))`.
fn sigmoid_and_bce(z: f64, y: f64) -> (f64, f64) {
    let e = (-z.abs()).exp();
    let log_term = e.ln_1p();
    if z >= 0.0 {
        (1.0 / (1.0 + e), z - z * y + log_term)
    } else {
        (e / (1.0 + e), -z * y + log_term)
    }
}

const ROW_CHUNK: usize = 4096;
const DIVERGENCE_LIMIT: usize = 50;

/// Fits the estimator by full-batch gradient descent on standardized
/// features, starting from zero weights.
///
/// Stops when the loss change drops below `tolerance` or after `max_iters`
/// steps; errors out if the loss rises for 50 consecutive iterations.
pub fn train(data: &SnapshotDataset, cfg: &TrainConfig) -> Result<LogisticModel> {
    cfg.validate()?;
    if data.is_empty() {
        return Err(Error::EmptyPredictionSet);
    }
    let has_zero = data.outcomes().contains(&0);
    let has_one = data.outcomes().contains(&1);
    if !(has_zero && has_one) {
        return Err(Error::SingleClassData);
    }

    let n = data.len();
    let stats = StandardizationStats::fit(data);
    let mut x = vec![0.0f64; n * FEATURE_COUNT];
    for i in 0..n {
        stats.apply(
            data.row(i),
            &mut x[i * FEATURE_COUNT..(i + 1) * FEATURE_COUNT],
        );
    }
    let y: Vec<f64> = data.outcomes().iter().map(|&v| f64::from(v)).collect();

    let mut weights = vec![0.0f64; FEATURE_COUNT];
    let mut bias = 0.0f64;
    let mut prev_loss = f64::INFINITY;
    let mut consecutive_increases = 0usize;
    let mut trace = Vec::new();
    let mut iterations = 0usize;
    let mut converged = false;

    let final_loss = loop {
        let (data_loss, mut grad, grad_bias) = evaluate(&x, &y, &weights, bias);
        let mut loss = data_loss;
        if cfg.l2 > 0.0 {
            let norm_sq: f64 = weights.iter().map(|w| w * w).sum();
            loss += 0.5 * cfg.l2 * norm_sq;
            for (g, w) in grad.iter_mut().zip(&weights) {
                *g += cfg.l2 * w;
            }
        }
        trace.push(loss);

        if loss > prev_loss {
            consecutive_increases += 1;
            if consecutive_increases >= DIVERGENCE_LIMIT {
                return Err(Error::TrainingDiverged(consecutive_increases));
            }
        } else {
            consecutive_increases = 0;
        }
        if (prev_loss - loss).abs() < cfg.tolerance {
            converged = true;
            break loss;
        }
        if iterations == cfg.max_iters {
            break loss;
        }

        for (w, g) in weights.iter_mut().zip(&grad) {
            *w -= cfg.learning_rate * g;
        }
        bias -= cfg.learning_rate * grad_bias;
        prev_loss = loss;
        iterations += 1;
    };

    Ok(LogisticModel {
        weights,
        bias,
        standardization: stats,
        config: *cfg,
        meta: TrainingMeta {
            iterations,
            final_loss,
            converged,
            loss_trace: trace,
        },
    })
}

type EvalPartial = (CompensatedSum, [f64; FEATURE_COUNT], f64);

/// Mean loss and gradient in one fused pass; chunk-parallel with a fixed
/// merge order so results are identical across thread schedules.
fn evaluate(x: &[f64], y: &[f64], weights: &[f64], bias: f64) -> (f64, [f64; FEATURE_COUNT], f64) {
    let n = y.len();
    let partials: Vec<EvalPartial> = x
        .par_chunks(ROW_CHUNK * FEATURE_COUNT)
        .zip(y.par_chunks(ROW_CHUNK))
        .map(|(x_chunk, y_chunk)| {
            let mut loss = CompensatedSum::new();
            let mut grad = [0.0f64; FEATURE_COUNT];
            let mut grad_bias = 0.0f64;
            for (row, &label) in x_chunk.chunks_exact(FEATURE_COUNT).zip(y_chunk) {
                let z = bias + row.iter().zip(weights).map(|(xi, wi)| xi * wi).sum::<f64>();
                let (p, point_loss) = sigmoid_and_bce(z, label);
                loss.add(point_loss);
                let residual = p - label;
                for (g, xi) in grad.iter_mut().zip(row) {
                    *g += residual * xi;
                }
                grad_bias += residual;
            }
            (loss, grad, grad_bias)
        })
        .collect();

    let mut loss = CompensatedSum::new();
    let mut grad = [0.0f64; FEATURE_COUNT];
    let mut grad_bias = 0.0f64;
    for (l, g, gb) in &partials {
        loss.merge(l);
        for (acc, v) in grad.iter_mut().zip(g) {
            *acc += v;
        }
        grad_bias += gb;
    }
    let n_f = n as f64;
    for g in grad.iter_mut() {
        *g /= n_f;
    }
    (loss.total() / n_f, grad, grad_bias / n_f)
}

impl LogisticModel {
    /// Predicted win probability for one raw feature row, always inside the
    /// open interval (0, 1).
    pub fn predict_proba(&self, features: &[f64]) -> Result<f64> {
        if features.len() != FEATURE_COUNT {
            return Err(Error::FeatureDimensionMismatch {
                expected: FEATURE_COUNT,
                found: features.len(),
            });
        }
        for (j, v) in features.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFiniteFeature(format!("feature {j}")));
            }
        }
        let mut std_row = [0.0f64; FEATURE_COUNT];
        self.standardization.apply(features, &mut std_row);
        let z = self.bias
            + std_row
                .iter()
                .zip(&self.weights)
                .map(|(x, w)| x * w)
                .sum::<f64>();
        Ok(sigmoid(z).clamp(f64::MIN_POSITIVE, 1.0 - 1e-16))
    }

    /// Scores every row of a dataset against its recorded outcomes.
    pub fn predict_set(&self, ds: &SnapshotDataset) -> Result<PredictionSet> {
        let mut items = Vec::with_capacity(ds.len());
        for i in 0..ds.len() {
            let p = self.predict_proba(ds.row(i))?;
            items.push(Prediction::new(p, ds.outcomes()[i])?);
        }
        Ok(PredictionSet::new(items))
    }

    pub fn to_json_writer<W: io::Write>(&self, writer: W) -> Result<()> {
        serde_json::to_writer_pretty(writer, self)?;
        Ok(())
    }

    pub fn from_json_reader<R: io::Read>(reader: R) -> Result<Self> {
        Ok(serde_json::from_reader(reader)?)
    }
}
