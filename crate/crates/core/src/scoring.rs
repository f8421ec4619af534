//! Pointwise scoring functions and the rule selector.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Squared error between the predicted probability and the outcome.
pub fn brier(p_hat: f64, outcome: u8) -> f64 {
    let d = p_hat - f64::from(outcome);
    d * d
}

/// Indicator that the hard class call at threshold 0.5 was correct.
/// A prediction of exactly 0.5 counts as predicting class 1.
pub fn accuracy(p_hat: f64, outcome: u8) -> f64 {
    let predicted_win = p_hat >= 0.5;
    if predicted_win == (outcome == 1) {
        1.0
    } else {
        0.0
    }
}

/// Gain/loss score: hard calls gain little when confident and correct, lose
/// much when confident and wrong, with the sizes arranged so that a
/// calibrated predictor nets zero in expectation.
pub fn balance(p_hat: f64, outcome: u8) -> f64 {
    match (p_hat >= 0.5, outcome == 1) {
        (true, true) => 1.0 - p_hat,
        (false, false) => p_hat,
        (true, false) => -p_hat,
        (false, true) => -1.0 + p_hat,
    }
}

/// Selector over the three pointwise scoring functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScoringRule {
    Accuracy,
    Brier,
    Balance,
}

impl ScoringRule {
    pub fn evaluate(&self, p_hat: f64, outcome: u8) -> f64 {
        match self {
            ScoringRule::Accuracy => accuracy(p_hat, outcome),
            ScoringRule::Brier => brier(p_hat, outcome),
            ScoringRule::Balance => balance(p_hat, outcome),
        }
    }

    pub const ALL: [ScoringRule; 3] = [
        ScoringRule::Accuracy,
        ScoringRule::Brier,
        ScoringRule::Balance,
    ];
}

impl fmt::Display for ScoringRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            ScoringRule::Accuracy => "accuracy",
            ScoringRule::Brier => "brier",
            ScoringRule::Balance => "balance",
        };
        f.write_str(name)
    }
}

impl FromStr for ScoringRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "accuracy" => Ok(ScoringRule::Accuracy),
            "brier" => Ok(ScoringRule::Brier),
            "balance" => Ok(ScoringRule::Balance),
            other => Err(Error::Parse(format!(
                "unknown scoring rule `{other}` (expected accuracy|brier|balance)"
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn balance_branches() {
        // Boundary prediction counts as a class-1 call.
        assert_eq!(balance(0.5, 1), 0.5);
        assert_eq!(balance(0.5, 0), -0.5);
        assert!((balance(0.7, 1) - 0.3).abs() < 1e-15);
        assert!((balance(0.7, 0) + 0.7).abs() < 1e-15);
        assert!((balance(0.3, 0) - 0.3).abs() < 1e-15);
        assert!((balance(0.3, 1) + 0.7).abs() < 1e-15);
    }

    #[test]
    fn accuracy_tie_goes_to_class_one() {
        assert_eq!(accuracy(0.5, 1), 1.0);
        assert_eq!(accuracy(0.5, 0), 0.0);
        assert_eq!(accuracy(0.7, 1), 1.0);
        assert_eq!(accuracy(0.7, 0), 0.0);
    }

    #[test]
    fn brier_matches_squared_error() {
        assert_eq!(brier(1.0, 1), 0.0);
        assert_eq!(brier(0.0, 1), 1.0);
        assert!((brier(0.7, 1) - 0.09).abs() < 1e-15);
    }

    #[test]
    fn rule_parsing() {
        assert_eq!(
            "balance".parse::<ScoringRule>().unwrap(),
            ScoringRule::Balance
        );
        assert!("median".parse::<ScoringRule>().is_err());
    }
}
