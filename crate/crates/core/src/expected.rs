//! Expected scores of a model under an operating condition: closed-form,
//! quadrature and Monte Carlo routes, plus the analytic true expected
//! calibration error for deterministic model maps.

use serde::{Deserialize, Serialize};
use statrs::function::beta::ln_beta;

use crate::batch::generate_batch;
use crate::distribution::ProbDistribution;
use crate::error::{Error, Result};
use crate::model::SyntheticModel;
use crate::quadrature::{integrate, QuadratureSpec};
use crate::scoring::ScoringRule;
use crate::sum::CompensatedSum;

/// Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
}

pub(crate) fn pointwise_expected_raw(rule: ScoringRule, q: f64, p: f64) -> f64 {
    p * rule.evaluate(q, 1) + (1.0 - p) * rule.evaluate(q, 0)
}

/// Expected score of predicting `q` when the true probability is `p`.
///
/// For the balance rule this is `p - q` when `q >= 0.5` and `q - p` below,
/// so it vanishes exactly at `q == p`.
pub fn pointwise_expected(rule: ScoringRule, q: f64, p: f64) -> Result<f64> {
    for v in [q, p] {
        if !v.is_finite() || !(0.0..=1.0).contains(&v) {
            return Err(Error::InvalidProbability(v));
        }
    }
    Ok(pointwise_expected_raw(rule, q, p))
}

/// The deterministic model map keeps each side of 0.5 on its own side, so
/// every scoring-branch discontinuity sits exactly at p = 0.5. Quadrature
/// panels split there and never straddle a kink.
const BRANCH_SPLIT: f64 = 0.5;

/// Expected score under the operating condition by composite quadrature.
///
/// The deterministic model collapses the response channel to a point
/// evaluation, leaving a single integral of the pointwise expected score
/// against the beta density. Densities unbounded at an endpoint are handled
/// by the `p = sin^2(theta)` substitution when the spec enables it.
pub fn expected_score_quadrature(
    rule: ScoringRule,
    dist: &ProbDistribution,
    model: &SyntheticModel,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let alpha = dist.alpha();
    let beta = dist.beta_param();
    let ln_b = ln_beta(alpha, beta);
    let model = *model;

    if spec.endpoint_substitution && dist.has_endpoint_singularity() {
        // p = sin^2(theta): the density-times-Jacobian weight becomes
        // 2 sin^(2a-1) cos^(2b-1) / B(a, b), bounded for a, b >= 1/2.
        let integrand = move |theta: f64| {
            let s = theta.sin();
            let c = theta.cos();
            let p = s * s;
            let weight =
                2.0 * ((2.0 * alpha - 1.0) * s.ln() + (2.0 * beta - 1.0) * c.ln() - ln_b).exp();
            pointwise_expected_raw(rule, model.map(p), p) * weight
        };
        let quarter = std::f64::consts::FRAC_PI_4;
        let half = std::f64::consts::FRAC_PI_2;
        integrate(integrand, &[(0.0, quarter), (quarter, half)], spec)
    } else {
        let integrand = move |p: f64| {
            let density = ((alpha - 1.0) * p.ln() + (beta - 1.0) * (1.0 - p).ln() - ln_b).exp();
            pointwise_expected_raw(rule, model.map(p), p) * density
        };
        integrate(integrand, &[(0.0, BRANCH_SPLIT), (BRANCH_SPLIT, 1.0)], spec)
    }
}

/// Monte Carlo expected score over a generated batch, with standard error.
pub fn expected_score_mc(
    rule: ScoringRule,
    dist: &ProbDistribution,
    model: &SyntheticModel,
    n: usize,
    seed: u64,
) -> Result<McEstimate> {
    if n < 2 {
        return Err(Error::InvalidSampleCount { min: 2, got: n });
    }
    let batch = generate_batch(dist, model, n, seed)?;
    let mut acc = CompensatedSum::new();
    for pred in &batch.predictions {
        acc.add(rule.evaluate(pred.p_hat(), pred.outcome()));
    }
    let mean = acc.total() / n as f64;

    let mut sq = CompensatedSum::new();
    for pred in &batch.predictions {
        let d = rule.evaluate(pred.p_hat(), pred.outcome()) - mean;
        sq.add(d * d);
    }
    let variance = sq.total() / (n - 1) as f64;
    Ok(McEstimate {
        mean,
        std_error: (variance / n as f64).sqrt(),
    })
}

/// True expected calibration error of a deterministic monotone model map:
/// the mean absolute miscalibration `|model(p) - p|` under the operating
/// condition.
///
/// The uniform/tendency combination uses the derived closed form `|t| / 4`;
/// everything else integrates numerically.
pub fn true_ece_analytic(
    dist: &ProbDistribution,
    model: &SyntheticModel,
    spec: &QuadratureSpec,
) -> Result<f64> {
    if !model.is_monotone() {
        return Err(Error::NonMonotoneModel);
    }
    match *model {
        SyntheticModel::Optimal => Ok(0.0),
        SyntheticModel::ConfidenceBiased { tendency } if dist.is_uniform() => {
            Ok(tendency.abs() / 4.0)
        }
        SyntheticModel::ConfidenceBiased { .. } => {
            let alpha = dist.alpha();
            let beta = dist.beta_param();
            let ln_b = ln_beta(alpha, beta);
            let model = *model;
            if spec.endpoint_substitution && dist.has_endpoint_singularity() {
                let integrand = move |theta: f64| {
                    let s = theta.sin();
                    let c = theta.cos();
                    let p = s * s;
                    let weight = 2.0
                        * ((2.0 * alpha - 1.0) * s.ln() + (2.0 * beta - 1.0) * c.ln() - ln_b).exp();
                    (model.map(p) - p).abs() * weight
                };
                let quarter = std::f64::consts::FRAC_PI_4;
                let half = std::f64::consts::FRAC_PI_2;
                integrate(integrand, &[(0.0, quarter), (quarter, half)], spec)
            } else {
                let integrand = move |p: f64| {
                    let density =
                        ((alpha - 1.0) * p.ln() + (beta - 1.0) * (1.0 - p).ln() - ln_b).exp();
                    (model.map(p) - p).abs() * density
                };
                integrate(integrand, &[(0.0, BRANCH_SPLIT), (BRANCH_SPLIT, 1.0)], spec)
            }
        }
    }
}
