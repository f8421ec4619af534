//! Operating conditions: the distribution of ground-truth win probabilities.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::Distribution as _;
use serde::{Deserialize, Serialize};
use statrs::function::beta::ln_beta;

use crate::error::{Error, Result};

/// Beta-family distribution of ground-truth probabilities on [0, 1].
/// The uniform operating condition is `Beta(1, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbDistribution {
    alpha: f64,
    beta: f64,
}

impl ProbDistribution {
    pub fn beta(alpha: f64, beta: f64) -> Result<Self> {
        if !alpha.is_finite() || !beta.is_finite() || alpha <= 0.0 || beta <= 0.0 {
            return Err(Error::InvalidBetaParams { alpha, beta });
        }
        Ok(Self { alpha, beta })
    }

    pub fn uniform() -> Self {
        Self {
            alpha: 1.0,
            beta: 1.0,
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta_param(&self) -> f64 {
        self.beta
    }

    pub fn is_uniform(&self) -> bool {
        self.alpha == 1.0 && self.beta == 1.0
    }

    /// True when the density is unbounded at an endpoint.
    pub fn has_endpoint_singularity(&self) -> bool {
        self.alpha < 1.0 || self.beta < 1.0
    }

    pub fn mean(&self) -> f64 {
        self.alpha / (self.alpha + self.beta)
    }

    pub fn variance(&self) -> f64 {
        let s = self.alpha + self.beta;
        self.alpha * self.beta / (s * s * (s + 1.0))
    }

    /// Density at `p`. Interior evaluations go through logs so extreme
    /// parameters stay stable; endpoints return the correct limit.
    pub fn pdf(&self, p: f64) -> f64 {
        if !(0.0..=1.0).contains(&p) {
            return 0.0;
        }
        let ln_b = ln_beta(self.alpha, self.beta);
        if p == 0.0 || p == 1.0 {
            let exponent = if p == 0.0 {
                self.alpha - 1.0
            } else {
                self.beta - 1.0
            };
            return if exponent > 0.0 {
                0.0
            } else if exponent == 0.0 {
                (-ln_b).exp()
            } else {
                f64::INFINITY
            };
        }
        ((self.alpha - 1.0) * p.ln() + (self.beta - 1.0) * (1.0 - p).ln() - ln_b).exp()
    }

    /// One draw; samples always lie in [0, 1].
    pub fn sample_one<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let beta = rand_distr::Beta::new(self.alpha, self.beta)
            .expect("parameters validated at construction");
        beta.sample(rng).clamp(0.0, 1.0)
    }

    /// Fills `out` with draws from one RNG stream.
    pub fn sample_into<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [f64]) {
        let beta = rand_distr::Beta::new(self.alpha, self.beta)
            .expect("parameters validated at construction");
        for slot in out {
            *slot = beta.sample(rng).clamp(0.0, 1.0);
        }
    }
}

impl fmt::Display for ProbDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Beta({}, {})", self.alpha, self.beta)
    }
}

impl FromStr for ProbDistribution {
    type Err = Error;

    /// Accepts `uniform` or `beta(alpha, beta)` (case-insensitive).
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        if t == "uniform" {
            return Ok(Self::uniform());
        }
        let inner = t
            .strip_prefix("beta(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| {
                Error::Parse(format!(
                    "unknown distribution `{s}` (expected `uniform` or `beta(a,b)`)"
                ))
            })?;
        let mut parts = inner.split(',');
        let alpha: f64 = parts
            .next()
            .map(str::trim)
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad beta parameters in `{s}`")))?;
        let beta: f64 = parts
            .next()
            .map(str::trim)
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad beta parameters in `{s}`")))?;
        if parts.next().is_some() {
            return Err(Error::Parse(format!("bad beta parameters in `{s}`")));
        }
        Self::beta(alpha, beta)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_parameters() {
        assert!(ProbDistribution::beta(0.0, 1.0).is_err());
        assert!(ProbDistribution::beta(1.0, -2.0).is_err());
        assert!(ProbDistribution::beta(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn uniform_pdf_is_one() {
        let d = ProbDistribution::uniform();
        assert!((d.pdf(0.3) - 1.0).abs() < 1e-12);
        assert!((d.pdf(0.9) - 1.0).abs() < 1e-12);
        assert!(d.is_uniform());
    }

    #[test]
    fn symmetric_beta_moments() {
        let d = ProbDistribution::beta(2.0, 2.0).unwrap();
        assert!((d.mean() - 0.5).abs() < 1e-15);
        assert!((d.variance() - 0.05).abs() < 1e-15);
        // pdf of Beta(2,2) is 6p(1-p)
        assert!((d.pdf(0.5) - 1.5).abs() < 1e-12);
    }

    #[test]
    fn singular_endpoints_detected() {
        assert!(ProbDistribution::beta(0.5, 0.5)
            .unwrap()
            .has_endpoint_singularity());
        assert!(!ProbDistribution::beta(2.0, 2.0)
            .unwrap()
            .has_endpoint_singularity());
        assert!(!ProbDistribution::uniform().has_endpoint_singularity());
    }

    #[test]
    fn parses_display_forms() {
        let d: ProbDistribution = "beta(0.5, 0.5)".parse().unwrap();
        assert_eq!(d.alpha(), 0.5);
        let u: ProbDistribution = "uniform".parse().unwrap();
        assert!(u.is_uniform());
        assert!("beta(1)".parse::<ProbDistribution>().is_err());
        assert!("gamma(1,2)".parse::<ProbDistribution>().is_err());
    }
}
