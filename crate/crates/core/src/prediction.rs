//! Prediction–outcome pairs, the universal metric input.

use std::io;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One predicted win probability paired with the realized binary outcome.
///
/// Construction validates the fields; out-of-range or non-finite inputs are
/// rejected rather than clamped, since silent clamping would mask model bugs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPrediction")]
pub struct Prediction {
    p_hat: f64,
    outcome: u8,
}

#[derive(Deserialize)]
struct RawPrediction {
    p_hat: f64,
    outcome: i64,
}

impl TryFrom<RawPrediction> for Prediction {
    type Error = Error;

    fn try_from(raw: RawPrediction) -> Result<Self> {
        if raw.outcome != 0 && raw.outcome != 1 {
            return Err(Error::InvalidOutcome(raw.outcome));
        }
        Prediction::new(raw.p_hat, raw.outcome as u8)
    }
}

impl Prediction {
    pub fn new(p_hat: f64, outcome: u8) -> Result<Self> {
        if !p_hat.is_finite() || !(0.0..=1.0).contains(&p_hat) {
            return Err(Error::InvalidProbability(p_hat));
        }
        if outcome > 1 {
            return Err(Error::InvalidOutcome(outcome as i64));
        }
        Ok(Self { p_hat, outcome })
    }

    pub fn p_hat(&self) -> f64 {
        self.p_hat
    }

    pub fn outcome(&self) -> u8 {
        self.outcome
    }

    pub fn outcome_f64(&self) -> f64 {
        f64::from(self.outcome)
    }
}

/// Ordered collection of predictions.
///
/// May be empty after construction; every metric rejects an empty set with
/// [`Error::EmptyPredictionSet`].
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PredictionSet {
    items: Vec<Prediction>,
}

impl PredictionSet {
    pub fn new(items: Vec<Prediction>) -> Self {
        Self { items }
    }

    /// Builds a set from `(p_hat, outcome)` pairs, validating each.
    pub fn from_pairs(pairs: &[(f64, u8)]) -> Result<Self> {
        pairs
            .iter()
            .map(|&(p, y)| Prediction::new(p, y))
            .collect::<Result<Vec<_>>>()
            .map(Self::new)
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn items(&self) -> &[Prediction] {
        &self.items
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Prediction> {
        self.items.iter()
    }

    /// Reads a `p_hat,outcome` CSV (header required). Errors cite the
    /// offending 1-based data row.
    pub fn from_csv_reader<R: io::Read>(reader: R) -> Result<Self> {
        let mut csv_reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_reader(reader);
        let headers = csv_reader.headers()?.clone();
        let p_idx = find_column(&headers, "p_hat")?;
        let y_idx = find_column(&headers, "outcome")?;

        let mut items = Vec::new();
        for (i, record) in csv_reader.records().enumerate() {
            let row = i + 1;
            let record = record?;
            let p_hat = parse_field(&record, p_idx, row, "p_hat")?;
            let outcome_raw = record.get(y_idx).unwrap_or("").trim();
            let outcome: i64 = outcome_raw
                .parse()
                .map_err(|_| Error::InvalidPredictionRow {
                    row,
                    reason: format!("outcome `{outcome_raw}` is not an integer"),
                })?;
            if outcome != 0 && outcome != 1 {
                return Err(Error::InvalidPredictionRow {
                    row,
                    reason: format!("outcome must be 0 or 1, got {outcome}"),
                });
            }
            let pred =
                Prediction::new(p_hat, outcome as u8).map_err(|e| Error::InvalidPredictionRow {
                    row,
                    reason: e.to_string(),
                })?;
            items.push(pred);
        }
        Ok(Self::new(items))
    }

    /// Reads a JSON array of `{"p_hat": <real>, "outcome": <0|1>}` objects.
    pub fn from_json_reader<R: io::Read>(reader: R) -> Result<Self> {
        let items: Vec<Prediction> = serde_json::from_reader(reader)?;
        Ok(Self::new(items))
    }

    pub fn to_csv_writer<W: io::Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["p_hat", "outcome"])?;
        for p in &self.items {
            w.write_record(&[p.p_hat().to_string(), p.outcome().to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

impl<'a> IntoIterator for &'a PredictionSet {
    type Item = &'a Prediction;
    type IntoIter = std::slice::Iter<'a, Prediction>;

    fn into_iter(self) -> Self::IntoIter {
        self.items.iter()
    }
}

fn find_column(headers: &csv::StringRecord, name: &str) -> Result<usize> {
    headers
        .iter()
        .position(|h| h.trim() == name)
        .ok_or_else(|| Error::Parse(format!("missing required column `{name}`")))
}

fn parse_field(record: &csv::StringRecord, idx: usize, row: usize, name: &str) -> Result<f64> {
    let raw = record.get(idx).unwrap_or("").trim();
    raw.parse().map_err(|_| Error::InvalidPredictionRow {
        row,
        reason: format!("{name} `{raw}` is not a number"),
    })
}
