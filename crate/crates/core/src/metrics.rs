//! Aggregate metrics over a prediction set: accuracy, Brier (with its
//! calibration/sharpness decomposition), binned calibration error and the
//! Balance score.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::prediction::PredictionSet;
use crate::scoring;
use crate::sum::CompensatedSum;

/// Statistics of one equal-width probability bin.
///
/// Bin `m` (1-based) covers `[(m-1)/M, m/M)`; the last bin is closed at 1.0
/// so a prediction of exactly 1.0 is representable. Empty bins keep
/// `count == 0` and carry `None` means instead of NaN.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinStats {
    pub bin_index: usize,
    pub lower: f64,
    pub upper: f64,
    pub count: usize,
    pub mean_outcome: Option<f64>,
    pub mean_p_hat: Option<f64>,
    pub gap: Option<f64>,
}

impl BinStats {
    pub fn is_empty(&self) -> bool {
        self.count == 0
    }
}

/// Split of the Brier score into a calibration term and a sharpness term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BrierDecomposition {
    pub total: f64,
    pub calibration_term: f64,
    pub sharpness_term: f64,
}

/// One row of results: every metric over a single prediction set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub accuracy: f64,
    pub brier: f64,
    pub brier_decomposition: BrierDecomposition,
    pub ece: f64,
    pub ece_bins: usize,
    pub balance: f64,
    pub n: usize,
}

fn require_nonempty(preds: &PredictionSet) -> Result<()> {
    if preds.is_empty() {
        Err(Error::EmptyPredictionSet)
    } else {
        Ok(())
    }
}

fn mean_of(preds: &PredictionSet, f: impl Fn(f64, u8) -> f64) -> f64 {
    let mut acc = CompensatedSum::new();
    for p in preds {
        acc.add(f(p.p_hat(), p.outcome()));
    }
    acc.total() / preds.len() as f64
}

/// Fraction of correct hard class calls at threshold 0.5 (ties count as
/// class 1).
pub fn score_accuracy(preds: &PredictionSet) -> Result<f64> {
    require_nonempty(preds)?;
    Ok(mean_of(preds, scoring::accuracy))
}

/// Mean squared error between predictions and outcomes.
pub fn score_brier(preds: &PredictionSet) -> Result<f64> {
    require_nonempty(preds)?;
    Ok(mean_of(preds, scoring::brier))
}

/// Splits the Brier score into its calibration and sharpness terms.
///
/// `total` is computed through [`score_brier`], not by adding the terms, so
/// the identity `total == calibration + sharpness` stays a checkable
/// property rather than a tautology.
pub fn decompose_brier(preds: &PredictionSet) -> Result<BrierDecomposition> {
    require_nonempty(preds)?;
    let calibration_term = mean_of(preds, |p, y| (p - f64::from(y)) * (2.0 * p - 1.0));
    let sharpness_term = mean_of(preds, |p, _| p * (1.0 - p));
    Ok(BrierDecomposition {
        total: score_brier(preds)?,
        calibration_term,
        sharpness_term,
    })
}

/// Mean gain/loss Balance score.
pub fn score_balance(preds: &PredictionSet) -> Result<f64> {
    require_nonempty(preds)?;
    Ok(mean_of(preds, scoring::balance))
}

/// Partitions predictions into `m_bins` equal-width bins over [0, 1].
///
/// Each prediction lands in exactly one bin; the assignment agrees bit-for-
/// bit with the edge comparison `lower <= p < upper` (last bin closed).
pub fn compute_bins(preds: &PredictionSet, m_bins: usize) -> Result<Vec<BinStats>> {
    if m_bins < 1 {
        return Err(Error::InvalidBinCount);
    }
    require_nonempty(preds)?;

    let m = m_bins as f64;
    let mut outcome_sums = vec![CompensatedSum::new(); m_bins];
    let mut p_hat_sums = vec![CompensatedSum::new(); m_bins];
    let mut counts = vec![0usize; m_bins];

    for pred in preds {
        let p = pred.p_hat();
        let mut idx = ((p * m) as usize).min(m_bins - 1);
        // Snap against the actual edges: `p * m` can round across a boundary.
        if p < idx as f64 / m {
            idx -= 1;
        } else if idx + 1 < m_bins && p >= (idx + 1) as f64 / m {
            idx += 1;
        }
        counts[idx] += 1;
        outcome_sums[idx].add(pred.outcome_f64());
        p_hat_sums[idx].add(p);
    }

    Ok((0..m_bins)
        .map(|i| {
            let count = counts[i];
            let (mean_outcome, mean_p_hat, gap) = if count > 0 {
                let my = outcome_sums[i].total() / count as f64;
                let mp = p_hat_sums[i].total() / count as f64;
                (Some(my), Some(mp), Some((my - mp).abs()))
            } else {
                (None, None, None)
            };
            BinStats {
                bin_index: i + 1,
                lower: i as f64 / m,
                upper: if i + 1 == m_bins {
                    1.0
                } else {
                    (i + 1) as f64 / m
                },
                count,
                mean_outcome,
                mean_p_hat,
                gap,
            }
        })
        .collect())
}

fn ece_from_bins(bins: &[BinStats], n: usize) -> f64 {
    let mut acc = CompensatedSum::new();
    for bin in bins {
        if let Some(gap) = bin.gap {
            acc.add(bin.count as f64 / n as f64 * gap);
        }
    }
    acc.total()
}

/// Expected calibration error: bin-count-weighted mean absolute gap between
/// the mean outcome and the mean prediction per bin. Empty bins contribute
/// zero.
pub fn score_ece(preds: &PredictionSet, m_bins: usize) -> Result<f64> {
    let bins = compute_bins(preds, m_bins)?;
    Ok(ece_from_bins(&bins, preds.len()))
}

/// Maximum calibration error: the largest gap over occupied bins.
pub fn score_mce(preds: &PredictionSet, m_bins: usize) -> Result<f64> {
    let bins = compute_bins(preds, m_bins)?;
    Ok(bins.iter().filter_map(|b| b.gap).fold(0.0, f64::max))
}

/// Every metric over one prediction set; deterministic given the inputs.
pub fn full_report(preds: &PredictionSet, m_bins: usize) -> Result<MetricReport> {
    Ok(MetricReport {
        accuracy: score_accuracy(preds)?,
        brier: score_brier(preds)?,
        brier_decomposition: decompose_brier(preds)?,
        ece: score_ece(preds, m_bins)?,
        ece_bins: m_bins,
        balance: score_balance(preds)?,
        n: preds.len(),
    })
}
