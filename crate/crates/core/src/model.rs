//! Synthetic response models: the channel from true probability to
//! predicted probability.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Deterministic map from a ground-truth probability to the model's
/// prediction.
///
/// `ConfidenceBiased` mixes the truth with an anchor: a positive tendency
/// pulls toward the nearest certainty (0 below 0.5, 1 at or above), a
/// negative tendency shrinks toward 0.5. Tendency 0 reduces to the optimal
/// identity map.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SyntheticModel {
    Optimal,
    ConfidenceBiased { tendency: f64 },
}

impl SyntheticModel {
    pub fn optimal() -> Self {
        SyntheticModel::Optimal
    }

    pub fn confidence_biased(tendency: f64) -> Result<Self> {
        if !tendency.is_finite() || !(-1.0..=1.0).contains(&tendency) {
            return Err(Error::InvalidTendency(tendency));
        }
        Ok(SyntheticModel::ConfidenceBiased { tendency })
    }

    /// The model map on a probability already known to be in [0, 1].
    pub(crate) fn map(&self, p: f64) -> f64 {
        match *self {
            SyntheticModel::Optimal => p,
            SyntheticModel::ConfidenceBiased { tendency: t } => {
                let mapped = if t >= 0.0 {
                    let anchor = if p >= 0.5 { 1.0 } else { 0.0 };
                    (1.0 - t) * p + t * anchor
                } else {
                    let w = -t;
                    (1.0 - w) * p + w * 0.5
                };
                mapped.clamp(0.0, 1.0)
            }
        }
    }

    /// Applies the model to one true probability.
    pub fn apply(&self, p: f64) -> Result<f64> {
        if !p.is_finite() || !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidProbability(p));
        }
        Ok(self.map(p))
    }

    /// Whether the map is monotone nondecreasing on [0, 1]. Holds for every
    /// representable variant; the conditional-frequency constructions in the
    /// expected-score engine require it.
    pub fn is_monotone(&self) -> bool {
        match self {
            SyntheticModel::Optimal => true,
            SyntheticModel::ConfidenceBiased { .. } => true,
        }
    }

    pub fn tendency(&self) -> f64 {
        match *self {
            SyntheticModel::Optimal => 0.0,
            SyntheticModel::ConfidenceBiased { tendency } => tendency,
        }
    }
}

impl fmt::Display for SyntheticModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SyntheticModel::Optimal => f.write_str("optimal"),
            SyntheticModel::ConfidenceBiased { tendency } => write!(f, "biased:{tendency}"),
        }
    }
}

impl FromStr for SyntheticModel {
    type Err = Error;

    /// Accepts `optimal` or `biased:<tendency>`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        if t == "optimal" {
            return Ok(SyntheticModel::Optimal);
        }
        if let Some(raw) = t.strip_prefix("biased:") {
            let tendency: f64 = raw
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad tendency `{raw}` in model spec `{s}`")))?;
            return SyntheticModel::confidence_biased(tendency);
        }
        Err(Error::Parse(format!(
            "unknown model `{s}` (expected `optimal` or `biased:<tendency>`)"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overconfident_worked_examples() {
        let m = SyntheticModel::confidence_biased(0.1).unwrap();
        assert!((m.apply(0.6).unwrap() - 0.64).abs() < 1e-15);
        assert!((m.apply(0.2).unwrap() - 0.18).abs() < 1e-15);
    }

    #[test]
    fn optimal_is_identity() {
        let m = SyntheticModel::optimal();
        for p in [0.0, 0.25, 0.5, 0.99, 1.0] {
            assert_eq!(m.apply(p).unwrap(), p);
        }
    }

    #[test]
    fn zero_tendency_reduces_to_identity() {
        let m = SyntheticModel::confidence_biased(0.0).unwrap();
        for p in [0.0, 0.3, 0.5, 0.8, 1.0] {
            assert_eq!(m.apply(p).unwrap(), p);
        }
    }

    #[test]
    fn underconfident_shrinks_toward_half() {
        let m = SyntheticModel::confidence_biased(-0.2).unwrap();
        assert!((m.apply(0.9).unwrap() - 0.82).abs() < 1e-15);
        assert!((m.apply(0.1).unwrap() - 0.18).abs() < 1e-15);
        assert_eq!(m.apply(0.5).unwrap(), 0.5);
    }

    #[test]
    fn output_stays_in_unit_interval() {
        for &t in &[-1.0, -0.5, 0.0, 0.5, 1.0] {
            let m = SyntheticModel::confidence_biased(t).unwrap();
            for i in 0..=100 {
                let p = i as f64 / 100.0;
                let q = m.apply(p).unwrap();
                assert!((0.0..=1.0).contains(&q), "t={t} p={p} q={q}");
            }
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(SyntheticModel::confidence_biased(1.5).is_err());
        assert!(SyntheticModel::confidence_biased(f64::NAN).is_err());
        let m = SyntheticModel::optimal();
        assert!(m.apply(-0.1).is_err());
        assert!(m.apply(1.1).is_err());
        assert!(m.apply(f64::NAN).is_err());
    }

    #[test]
    fn parses_model_specs() {
        assert_eq!(
            "optimal".parse::<SyntheticModel>().unwrap(),
            SyntheticModel::Optimal
        );
        let m: SyntheticModel = "biased:0.11".parse().unwrap();
        assert_eq!(m.tendency(), 0.11);
        assert!("biased:2".parse::<SyntheticModel>().is_err());
        assert!("oracle".parse::<SyntheticModel>().is_err());
    }
}
