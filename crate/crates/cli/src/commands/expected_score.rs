//! `probcal expected-score`: expected score of one (rule, condition, model)
//! triple by quadrature or Monte Carlo.

use probcal::{
    expected_score_mc, expected_score_quadrature, ProbDistribution, QuadratureSpec, ScoringRule,
    SyntheticModel,
};
use serde::{Deserialize, Serialize};

use crate::args::{ExpectedScoreArgs, Method};
use crate::commands::load_config;
use crate::config::resolve;
use crate::report::write_out;
use crate::DEFAULT_SEED;

const DEFAULT_N: usize = 100_000;

/// The emitted record.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExpectedScoreRecord {
    pub rule: String,
    pub distribution: String,
    pub model: String,
    pub method: String,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub std_error: Option<f64>,
}

pub fn run(args: ExpectedScoreArgs) -> anyhow::Result<()> {
    let config = load_config(&args.common)?;
    let rule: ScoringRule = args.rule.parse()?;
    let dist: ProbDistribution = args
        .dist
        .clone()
        .or_else(|| {
            config
                .distributions
                .as_ref()
                .and_then(|d| d.first().cloned())
        })
        .map(|s| s.parse())
        .transpose()?
        .unwrap_or_else(ProbDistribution::uniform);
    let model: SyntheticModel = args
        .model
        .clone()
        .or_else(|| config.models.as_ref().and_then(|m| m.first().cloned()))
        .map(|s| s.parse())
        .transpose()?
        .unwrap_or(SyntheticModel::Optimal);
    let method = args.method.unwrap_or(Method::Quadrature);

    let record = match method {
        Method::Quadrature => {
            let value = expected_score_quadrature(rule, &dist, &model, &QuadratureSpec::default())?;
            ExpectedScoreRecord {
                rule: rule.to_string(),
                distribution: dist.to_string(),
                model: model.to_string(),
                method: "quadrature".into(),
                value,
                std_error: None,
            }
        }
        Method::Mc => {
            let n = resolve(args.n, config.n, DEFAULT_N);
            let seed = resolve(args.common.seed, config.seed, DEFAULT_SEED);
            eprintln!("expected-score: seed={seed} n={n}");
            let est = expected_score_mc(rule, &dist, &model, n, seed)?;
            ExpectedScoreRecord {
                rule: rule.to_string(),
                distribution: dist.to_string(),
                model: model.to_string(),
                method: "mc".into(),
                value: est.mean,
                std_error: Some(est.std_error),
            }
        }
    };

    let mut json = serde_json::to_string_pretty(&record)?;
    json.push('\n');
    print!("{json}");
    if let Some(dir) = args.common.out.as_deref().or(config.out.as_deref()) {
        write_out(dir, "expected_score.json", &json)?;
    }
    Ok(())
}
