//! Seeded generation of scored batches with known ground truth.

use std::io;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distribution::ProbDistribution;
use crate::error::{Error, Result};
use crate::model::SyntheticModel;
use crate::prediction::{Prediction, PredictionSet};
use crate::rng::{chunk_rng, StreamFamily, GEN_CHUNK};

/// A batch of predictions whose ground-truth probabilities are known.
///
/// `true_p` is the hidden truth; downstream metric evaluation sees only the
/// prediction set unless it opts into the oracle column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredBatch {
    pub true_p: Vec<f64>,
    pub predictions: PredictionSet,
    pub seed: u64,
}

/// `n` i.i.d. draws from the operating condition; deterministic given the
/// seed and identical under serial or parallel execution.
pub fn sample_probs(dist: &ProbDistribution, n: usize, seed: u64) -> Result<Vec<f64>> {
    if n < 1 {
        return Err(Error::InvalidSampleCount { min: 1, got: n });
    }
    let chunks: Vec<Vec<f64>> = (0..n.div_ceil(GEN_CHUNK))
        .into_par_iter()
        .map(|c| {
            let len = GEN_CHUNK.min(n - c * GEN_CHUNK);
            let mut rng = chunk_rng(seed, StreamFamily::Probs, c);
            let mut out = vec![0.0; len];
            dist.sample_into(&mut rng, &mut out);
            out
        })
        .collect();
    Ok(chunks.concat())
}

/// Draws `(p, y, p_hat)` triples: `p` from the operating condition,
/// `y ~ Bernoulli(p)`, `p_hat = model(p)`.
///
/// Probability and outcome draws read disjoint RNG streams, so swapping the
/// response model reuses exactly the same `(p, y)` pairs.
pub fn generate_batch(
    dist: &ProbDistribution,
    model: &SyntheticModel,
    n: usize,
    seed: u64,
) -> Result<ScoredBatch> {
    if n < 1 {
        return Err(Error::InvalidSampleCount { min: 1, got: n });
    }
    let chunks: Vec<(Vec<f64>, Vec<Prediction>)> = (0..n.div_ceil(GEN_CHUNK))
        .into_par_iter()
        .map(|c| -> Result<(Vec<f64>, Vec<Prediction>)> {
            let len = GEN_CHUNK.min(n - c * GEN_CHUNK);
            let mut prob_rng = chunk_rng(seed, StreamFamily::Probs, c);
            let mut outcome_rng = chunk_rng(seed, StreamFamily::Outcomes, c);

            let mut true_p = vec![0.0; len];
            dist.sample_into(&mut prob_rng, &mut true_p);

            let mut preds = Vec::with_capacity(len);
            for &p in &true_p {
                let y = u8::from(outcome_rng.random::<f64>() < p);
                preds.push(Prediction::new(model.apply(p)?, y)?);
            }
            Ok((true_p, preds))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut true_p = Vec::with_capacity(n);
    let mut items = Vec::with_capacity(n);
    for (ps, preds) in chunks {
        true_p.extend(ps);
        items.extend(preds);
    }
    Ok(ScoredBatch {
        true_p,
        predictions: PredictionSet::new(items),
        seed,
    })
}

impl ScoredBatch {
    pub fn len(&self) -> usize {
        self.true_p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.true_p.is_empty()
    }

    /// Writes `true_p,p_hat,outcome` rows; the first column is the hidden
    /// ground truth.
    pub fn to_csv_writer<W: io::Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["true_p", "p_hat", "outcome"])?;
        for (p, pred) in self.true_p.iter().zip(self.predictions.iter()) {
            w.write_record(&[
                p.to_string(),
                pred.p_hat().to_string(),
                pred.outcome().to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform() -> ProbDistribution {
        ProbDistribution::uniform()
    }

    #[test]
    fn fixed_seed_reproduces_bitwise() {
        let model = SyntheticModel::confidence_biased(0.1).unwrap();
        let a = generate_batch(&uniform(), &model, 20_000, 9).unwrap();
        let b = generate_batch(&uniform(), &model, 20_000, 9).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn serial_pool_matches_default_pool() {
        let model = SyntheticModel::optimal();
        let parallel = generate_batch(&uniform(), &model, 30_000, 5).unwrap();
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let serial = pool.install(|| generate_batch(&uniform(), &model, 30_000, 5).unwrap());
        assert_eq!(parallel, serial);
    }

    #[test]
    fn optimal_model_echoes_true_p() {
        let batch = generate_batch(&uniform(), &SyntheticModel::optimal(), 5_000, 3).unwrap();
        for (p, pred) in batch.true_p.iter().zip(batch.predictions.iter()) {
            assert_eq!(*p, pred.p_hat());
        }
    }

    #[test]
    fn model_choice_does_not_perturb_draws() {
        let optimal = generate_batch(&uniform(), &SyntheticModel::optimal(), 10_000, 11).unwrap();
        let biased = generate_batch(
            &uniform(),
            &SyntheticModel::confidence_biased(0.1).unwrap(),
            10_000,
            11,
        )
        .unwrap();
        assert_eq!(optimal.true_p, biased.true_p);
        for (a, b) in optimal.predictions.iter().zip(biased.predictions.iter()) {
            assert_eq!(a.outcome(), b.outcome());
        }
    }

    #[test]
    fn sample_probs_matches_batch_truth() {
        let dist = ProbDistribution::beta(2.0, 2.0).unwrap();
        let probs = sample_probs(&dist, 12_345, 17).unwrap();
        let batch = generate_batch(&dist, &SyntheticModel::optimal(), 12_345, 17).unwrap();
        assert_eq!(probs, batch.true_p);
    }

    #[test]
    fn zero_items_rejected() {
        assert!(sample_probs(&uniform(), 0, 1).is_err());
        assert!(generate_batch(&uniform(), &SyntheticModel::optimal(), 0, 1).is_err());
    }

    #[test]
    fn csv_layout() {
        let batch = generate_batch(&uniform(), &SyntheticModel::optimal(), 3, 1).unwrap();
        let mut buf = Vec::new();
        batch.to_csv_writer(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("true_p,p_hat,outcome\n"));
        assert_eq!(text.lines().count(), 4);
    }
}
