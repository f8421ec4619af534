//! Game-snapshot datasets: loading, splitting and the synthetic generator
//! with known ground-truth probabilities.

use std::fmt;
use std::io;
use std::path::Path;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution as _, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distribution::ProbDistribution;
use crate::error::{Error, Result};
use crate::rng::{chunk_rng, StreamFamily, GEN_CHUNK};

/// Snapshot feature dimension: per-role gold and experience differentials,
/// dragons and towers per team.
pub const FEATURE_COUNT: usize = 14;

/// Column names used by the synthetic snapshot generator.
pub const SNAPSHOT_FEATURE_NAMES: [&str; FEATURE_COUNT] = [
    "gold_diff_top",
    "gold_diff_jng",
    "gold_diff_mid",
    "gold_diff_bot",
    "gold_diff_sup",
    "exp_diff_top",
    "exp_diff_jng",
    "exp_diff_mid",
    "exp_diff_bot",
    "exp_diff_sup",
    "dragons_blue",
    "dragons_red",
    "towers_blue",
    "towers_red",
];

// Per-column affine placement so generated columns live on realistic scales
// and downstream standardization is actually exercised.
const COLUMN_SCALES: [f64; FEATURE_COUNT] = [
    2400.0, 2650.0, 2500.0, 2800.0, 1900.0, 1500.0, 1650.0, 1550.0, 1700.0, 1350.0, 1.3, 1.2, 1.6,
    1.4,
];
const COLUMN_OFFSETS: [f64; FEATURE_COUNT] = [
    0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.5, 1.5, 2.0, 2.0,
];

/// Feature matrix plus outcomes; synthetic data also carries the hidden
/// ground-truth probability per row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnapshotDataset {
    feature_names: Vec<String>,
    /// Row-major `n x FEATURE_COUNT`.
    features: Vec<f64>,
    outcomes: Vec<u8>,
    true_p: Option<Vec<f64>>,
}

impl SnapshotDataset {
    pub fn new(
        feature_names: Vec<String>,
        features: Vec<f64>,
        outcomes: Vec<u8>,
        true_p: Option<Vec<f64>>,
    ) -> Result<Self> {
        if feature_names.len() != FEATURE_COUNT {
            return Err(Error::FeatureDimensionMismatch {
                expected: FEATURE_COUNT,
                found: feature_names.len(),
            });
        }
        let n = outcomes.len();
        if features.len() != n * FEATURE_COUNT {
            return Err(Error::FeatureDimensionMismatch {
                expected: n * FEATURE_COUNT,
                found: features.len(),
            });
        }
        for (i, y) in outcomes.iter().enumerate() {
            if *y > 1 {
                return Err(Error::InvalidLabel {
                    row: i + 1,
                    value: y.to_string(),
                });
            }
        }
        for (i, row) in features.chunks_exact(FEATURE_COUNT).enumerate() {
            for (j, v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::NonFiniteValue {
                        row: i + 1,
                        column: feature_names[j].clone(),
                    });
                }
            }
        }
        if let Some(p) = &true_p {
            if p.len() != n {
                return Err(Error::Parse(format!(
                    "true_p length {} does not match {} rows",
                    p.len(),
                    n
                )));
            }
        }
        Ok(Self {
            feature_names,
            features,
            outcomes,
            true_p,
        })
    }

    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.features[i * FEATURE_COUNT..(i + 1) * FEATURE_COUNT]
    }

    pub fn outcomes(&self) -> &[u8] {
        &self.outcomes
    }

    pub fn true_p(&self) -> Option<&[f64]> {
        self.true_p.as_deref()
    }

    /// Writes the dataset as CSV: feature columns, `outcome`, and `true_p`
    /// when present.
    pub fn to_csv_writer<W: io::Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let mut header: Vec<String> = self.feature_names.clone();
        header.push("outcome".into());
        if self.true_p.is_some() {
            header.push("true_p".into());
        }
        w.write_record(&header)?;
        for i in 0..self.len() {
            let mut record: Vec<String> = self.row(i).iter().map(|v| v.to_string()).collect();
            record.push(self.outcomes[i].to_string());
            if let Some(p) = &self.true_p {
                record.push(p[i].to_string());
            }
            w.write_record(&record)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Loads a snapshot CSV: any 14 feature columns plus `outcome` and an
/// optional `true_p`. Errors name the offending 1-based data row and column;
/// row order is preserved.
pub fn load_dataset(path: &Path) -> Result<SnapshotDataset> {
    let file = std::fs::File::open(path)?;
    load_dataset_reader(file)
}

pub fn load_dataset_reader<R: io::Read>(reader: R) -> Result<SnapshotDataset> {
    let mut csv_reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(reader);
    let headers = csv_reader.headers()?.clone();

    let mut outcome_idx = None;
    let mut true_p_idx = None;
    let mut feature_cols: Vec<(usize, String)> = Vec::new();
    for (i, name) in headers.iter().enumerate() {
        match name.trim() {
            "outcome" => outcome_idx = Some(i),
            "true_p" => true_p_idx = Some(i),
            other => feature_cols.push((i, other.to_string())),
        }
    }
    let outcome_idx =
        outcome_idx.ok_or_else(|| Error::Parse("missing required column `outcome`".into()))?;
    if feature_cols.len() != FEATURE_COUNT {
        return Err(Error::FeatureDimensionMismatch {
            expected: FEATURE_COUNT,
            found: feature_cols.len(),
        });
    }

    let mut features = Vec::new();
    let mut outcomes = Vec::new();
    let mut true_p = true_p_idx.map(|_| Vec::new());
    for (i, record) in csv_reader.records().enumerate() {
        let row = i + 1;
        let record = record?;
        for (idx, name) in &feature_cols {
            let raw = record.get(*idx).unwrap_or("").trim();
            let value: f64 = raw.parse().map_err(|_| {
                Error::Parse(format!(
                    "data row {row}, column `{name}`: `{raw}` is not a number"
                ))
            })?;
            if !value.is_finite() {
                return Err(Error::NonFiniteValue {
                    row,
                    column: name.clone(),
                });
            }
            features.push(value);
        }
        let raw = record.get(outcome_idx).unwrap_or("").trim();
        match raw.parse::<i64>() {
            Ok(0) => outcomes.push(0),
            Ok(1) => outcomes.push(1),
            _ => {
                return Err(Error::InvalidLabel {
                    row,
                    value: raw.to_string(),
                })
            }
        }
        if let (Some(idx), Some(ps)) = (true_p_idx, true_p.as_mut()) {
            let raw = record.get(idx).unwrap_or("").trim();
            let value: f64 = raw.parse().map_err(|_| {
                Error::Parse(format!(
                    "data row {row}, column `true_p`: `{raw}` is not a number"
                ))
            })?;
            ps.push(value);
        }
    }

    SnapshotDataset::new(
        feature_cols.into_iter().map(|(_, name)| name).collect(),
        features,
        outcomes,
        true_p,
    )
}

/// Seeded shuffle-then-cut split into disjoint, exhaustive train/test parts.
pub fn split(
    ds: &SnapshotDataset,
    train_fraction: f64,
    seed: u64,
) -> Result<(SnapshotDataset, SnapshotDataset)> {
    let n = ds.len();
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::DegenerateSplit {
            fraction: train_fraction,
            n,
        });
    }
    if n < 2 {
        return Err(Error::InvalidSampleCount { min: 2, got: n });
    }
    let n_train = (train_fraction * n as f64).round() as usize;
    if n_train == 0 || n_train == n {
        return Err(Error::DegenerateSplit {
            fraction: train_fraction,
            n,
        });
    }

    let mut indices: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    indices.shuffle(&mut rng);

    let gather = |idx: &[usize]| -> Result<SnapshotDataset> {
        let mut features = Vec::with_capacity(idx.len() * FEATURE_COUNT);
        let mut outcomes = Vec::with_capacity(idx.len());
        let mut true_p = ds.true_p.as_ref().map(|_| Vec::with_capacity(idx.len()));
        for &i in idx {
            features.extend_from_slice(ds.row(i));
            outcomes.push(ds.outcomes[i]);
            if let (Some(src), Some(dst)) = (&ds.true_p, true_p.as_mut()) {
                dst.push(src[i]);
            }
        }
        SnapshotDataset::new(ds.feature_names.clone(), features, outcomes, true_p)
    };

    Ok((gather(&indices[..n_train])?, gather(&indices[n_train..])?))
}

/// Match-time regimes and the operating condition each one induces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TimeProfile {
    /// Early game: probabilities concentrated near 0.5.
    Early,
    /// Mid game: roughly uniform win probabilities.
    Mid,
    /// Late game: probabilities leaning to both extremes.
    Late,
}

impl TimeProfile {
    pub fn distribution(&self) -> ProbDistribution {
        match self {
            TimeProfile::Early => ProbDistribution::beta(2.0, 2.0).expect("static params"),
            TimeProfile::Mid => ProbDistribution::uniform(),
            TimeProfile::Late => ProbDistribution::beta(0.5, 0.5).expect("static params"),
        }
    }

    pub const ALL: [TimeProfile; 3] = [TimeProfile::Early, TimeProfile::Mid, TimeProfile::Late];
}

impl fmt::Display for TimeProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            TimeProfile::Early => "early",
            TimeProfile::Mid => "mid",
            TimeProfile::Late => "late",
        };
        f.write_str(name)
    }
}

impl FromStr for TimeProfile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "early" => Ok(TimeProfile::Early),
            "mid" => Ok(TimeProfile::Mid),
            "late" => Ok(TimeProfile::Late),
            other => Err(Error::Parse(format!(
                "unknown time profile `{other}` (expected early|mid|late)"
            ))),
        }
    }
}

const LOGIT_CLAMP: f64 = 1e-12;

fn logit(p: f64) -> f64 {
    let p = p.clamp(LOGIT_CLAMP, 1.0 - LOGIT_CLAMP);
    (p / (1.0 - p)).ln()
}

/// Synthetic snapshots with known ground truth.
///
/// Each row draws `p` from the profile's operating condition and hides its
/// log-odds along a seeded unit direction of feature space; isotropic noise
/// fills the orthogonal complement. Every column correlates with the truth,
/// but jointly the features determine `p` exactly, so a well-trained
/// logistic model can be calibrated against the stored `true_p`.
pub fn generate_snapshots(n: usize, profile: TimeProfile, seed: u64) -> Result<SnapshotDataset> {
    if n < 1 {
        return Err(Error::InvalidSampleCount { min: 1, got: n });
    }
    let dist = profile.distribution();
    let basis = orthonormal_basis(&mut chunk_rng(seed, StreamFamily::Setup, 0));

    struct Chunk {
        features: Vec<f64>,
        outcomes: Vec<u8>,
        true_p: Vec<f64>,
    }

    let chunks: Vec<Chunk> = (0..n.div_ceil(GEN_CHUNK))
        .into_par_iter()
        .map(|c| {
            let len = GEN_CHUNK.min(n - c * GEN_CHUNK);
            let mut prob_rng = chunk_rng(seed, StreamFamily::Probs, c);
            let mut outcome_rng = chunk_rng(seed, StreamFamily::Outcomes, c);
            let mut noise_rng = chunk_rng(seed, StreamFamily::Noise, c);

            let mut true_p = vec![0.0; len];
            dist.sample_into(&mut prob_rng, &mut true_p);

            let mut features = Vec::with_capacity(len * FEATURE_COUNT);
            let mut outcomes = Vec::with_capacity(len);
            for &p in &true_p {
                let z = logit(p);
                let mut v = [0.0f64; FEATURE_COUNT];
                for (j, slot) in v.iter_mut().enumerate() {
                    *slot = z * basis[0][j];
                }
                for q in basis.iter().skip(1) {
                    let coeff: f64 = StandardNormal.sample(&mut noise_rng);
                    for (slot, qj) in v.iter_mut().zip(q) {
                        *slot += coeff * qj;
                    }
                }
                for j in 0..FEATURE_COUNT {
                    features.push(COLUMN_OFFSETS[j] + COLUMN_SCALES[j] * v[j]);
                }
                outcomes.push(u8::from(outcome_rng.random::<f64>() < p));
            }
            Chunk {
                features,
                outcomes,
                true_p,
            }
        })
        .collect();

    let mut features = Vec::with_capacity(n * FEATURE_COUNT);
    let mut outcomes = Vec::with_capacity(n);
    let mut true_p = Vec::with_capacity(n);
    for chunk in chunks {
        features.extend(chunk.features);
        outcomes.extend(chunk.outcomes);
        true_p.extend(chunk.true_p);
    }
    SnapshotDataset::new(
        SNAPSHOT_FEATURE_NAMES
            .iter()
            .map(|s| s.to_string())
            .collect(),
        features,
        outcomes,
        Some(true_p),
    )
}

/// Gram–Schmidt orthonormalization of a seeded Gaussian matrix; row `k` is
/// the k-th basis vector.
fn orthonormal_basis(rng: &mut ChaCha8Rng) -> Vec<[f64; FEATURE_COUNT]> {
    let mut basis: Vec<[f64; FEATURE_COUNT]> = Vec::with_capacity(FEATURE_COUNT);
    while basis.len() < FEATURE_COUNT {
        let mut v = [0.0f64; FEATURE_COUNT];
        for slot in v.iter_mut() {
            *slot = StandardNormal.sample(rng);
        }
        for q in &basis {
            let dot: f64 = v.iter().zip(q).map(|(a, b)| a * b).sum();
            for (slot, qj) in v.iter_mut().zip(q) {
                *slot -= dot * qj;
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm < 1e-6 {
            continue; // essentially-degenerate draw, take a fresh one
        }
        for slot in v.iter_mut() {
            *slot /= norm;
        }
        basis.push(v);
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_csv(features: usize, rows: &[&str]) -> String {
        let mut header: Vec<String> = (0..features).map(|j| format!("f{j}")).collect();
        header.push("outcome".into());
        let mut out = header.join(",");
        out.push('\n');
        for row in rows {
            out.push_str(row);
            out.push('\n');
        }
        out
    }

    fn row_of(features: usize, value: f64, outcome: &str) -> String {
        let mut cells: Vec<String> = (0..features).map(|_| value.to_string()).collect();
        cells.push(outcome.to_string());
        cells.join(",")
    }

    #[test]
    fn loads_well_formed_file() {
        let rows: Vec<String> = (0..3).map(|i| row_of(14, i as f64, "1")).collect();
        let refs: Vec<&str> = rows.iter().map(String::as_str).collect();
        let csv = tiny_csv(14, &refs);
        let ds = load_dataset_reader(csv.as_bytes()).unwrap();
        assert_eq!(ds.len(), 3);
        assert_eq!(ds.feature_names().len(), 14);
        assert!(ds.true_p().is_none());
    }

    #[test]
    fn rejects_wrong_feature_count() {
        let row = row_of(13, 1.0, "0");
        let csv = tiny_csv(13, &[&row]);
        let err = load_dataset_reader(csv.as_bytes()).unwrap_err();
        match err {
            Error::FeatureDimensionMismatch { expected, found } => {
                assert_eq!(expected, 14);
                assert_eq!(found, 13);
            }
            other => panic!("unexpected: {other}"),
        }
    }

    #[test]
    fn rejects_bad_label_citing_row() {
        let mut rows: Vec<String> = (0..6).map(|_| row_of(14, 0.5, "0")).collect();
        rows.push(row_of(14, 0.5, "2"));
        let refs: Vec<&str> = rows.iter().map(String::as_str).collect();
        let csv = tiny_csv(14, &refs);
        let err = load_dataset_reader(csv.as_bytes()).unwrap_err();
        match err {
            Error::InvalidLabel { row, value } => {
                assert_eq!(row, 7);
                assert_eq!(value, "2");
            }
            other => panic!("unexpected: {other}"),
        }
    }

    #[test]
    fn rejects_nan_citing_row_and_column() {
        let good = row_of(14, 1.0, "1");
        let mut cells: Vec<String> = (0..14).map(|_| "1.0".to_string()).collect();
        cells[3] = "NaN".into();
        cells.push("0".into());
        let bad = cells.join(",");
        let csv = tiny_csv(14, &[&good, &bad]);
        let err = load_dataset_reader(csv.as_bytes()).unwrap_err();
        match err {
            Error::NonFiniteValue { row, column } => {
                assert_eq!(row, 2);
                assert_eq!(column, "f3");
            }
            other => panic!("unexpected: {other}"),
        }
    }

    #[test]
    fn csv_round_trip_preserves_rows() {
        let ds = generate_snapshots(50, TimeProfile::Mid, 3).unwrap();
        let mut buf = Vec::new();
        ds.to_csv_writer(&mut buf).unwrap();
        let back = load_dataset_reader(buf.as_slice()).unwrap();
        assert_eq!(back.len(), 50);
        assert_eq!(back.outcomes(), ds.outcomes());
        for i in 0..50 {
            for (a, b) in ds.row(i).iter().zip(back.row(i)) {
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn split_sizes_and_disjointness() {
        let ds = generate_snapshots(10, TimeProfile::Mid, 5).unwrap();
        let (train, test) = split(&ds, 0.5, 1).unwrap();
        assert_eq!(train.len(), 5);
        assert_eq!(test.len(), 5);
        // Rows carry distinct noise; outcomes count must be conserved.
        let total_wins: u32 = ds.outcomes().iter().map(|&y| y as u32).sum();
        let split_wins: u32 = train
            .outcomes()
            .iter()
            .chain(test.outcomes())
            .map(|&y| y as u32)
            .sum();
        assert_eq!(total_wins, split_wins);
    }

    #[test]
    fn split_is_deterministic() {
        let ds = generate_snapshots(200, TimeProfile::Mid, 5).unwrap();
        let (a_train, a_test) = split(&ds, 0.6, 9).unwrap();
        let (b_train, b_test) = split(&ds, 0.6, 9).unwrap();
        assert_eq!(a_train, b_train);
        assert_eq!(a_test, b_test);
    }

    #[test]
    fn split_rejects_degenerate_fractions() {
        let ds = generate_snapshots(4, TimeProfile::Mid, 5).unwrap();
        assert!(split(&ds, 0.0, 1).is_err());
        assert!(split(&ds, 1.0, 1).is_err());
        assert!(split(&ds, 0.01, 1).is_err());
    }

    #[test]
    fn snapshots_store_matching_truth() {
        let ds = generate_snapshots(1000, TimeProfile::Early, 11).unwrap();
        let p = ds.true_p().unwrap();
        assert_eq!(p.len(), 1000);
        assert!(p.iter().all(|v| (0.0..=1.0).contains(v)));
    }

    #[test]
    fn snapshots_deterministic_and_pool_independent() {
        let a = generate_snapshots(20_000, TimeProfile::Late, 7).unwrap();
        let b = generate_snapshots(20_000, TimeProfile::Late, 7).unwrap();
        assert_eq!(a, b);
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let serial = pool.install(|| generate_snapshots(20_000, TimeProfile::Late, 7).unwrap());
        assert_eq!(a, serial);
    }

    #[test]
    fn basis_is_orthonormal() {
        let basis = orthonormal_basis(&mut chunk_rng(123, StreamFamily::Setup, 0));
        for i in 0..FEATURE_COUNT {
            for j in 0..FEATURE_COUNT {
                let dot: f64 = basis[i].iter().zip(&basis[j]).map(|(a, b)| a * b).sum();
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((dot - expected).abs() < 1e-10, "({i}, {j}) dot {dot}");
            }
        }
    }
}
