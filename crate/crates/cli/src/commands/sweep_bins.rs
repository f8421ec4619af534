//! `probcal sweep-bins`: binned calibration error across bin counts against
//! the constant absolute-balance reference, for confidence-biased models.
//!
//! One batch is shared per (tendency, replicate) pair across all bin counts,
//! and every tendency of a replicate reuses the same (p, y) draws.

use probcal::{
    derive_seed, generate_batch, score_balance, score_ece, ProbDistribution, SyntheticModel,
};
use rayon::prelude::*;

use crate::args::{OutputFormat, SweepBinsArgs};
use crate::commands::{load_config, stdout_format};
use crate::config::resolve;
use crate::report::{write_out, Provenance, ReportDocument, Series};
use crate::{usage, DEFAULT_SEED};

const DEFAULT_TENDENCIES: [f64; 2] = [0.1, 0.11];
const DEFAULT_M_MIN: usize = 5;
const DEFAULT_M_MAX: usize = 100;
const DEFAULT_N: usize = 10_000;
const DEFAULT_REPLICATES: usize = 20;

/// One (tendency, replicate) evaluation: constant |balance| plus the ECE at
/// every bin count.
pub struct SweepCell {
    pub tendency: f64,
    pub replicate: usize,
    pub abs_balance: f64,
    pub ece_by_m: Vec<f64>,
}

pub fn run(args: SweepBinsArgs) -> anyhow::Result<()> {
    let config = load_config(&args.common)?;
    let seed = resolve(args.common.seed, config.seed, DEFAULT_SEED);
    let n = resolve(args.n, config.n, DEFAULT_N);
    let m_min = resolve(args.m_min, config.bin_min, DEFAULT_M_MIN);
    let m_max = resolve(args.m_max, config.bin_max, DEFAULT_M_MAX);
    let replicates = resolve(args.replicates, config.replicates, DEFAULT_REPLICATES);
    let tendencies: Vec<f64> = if !args.tendencies.is_empty() {
        args.tendencies.clone()
    } else if let Some(models) = &config.models {
        models
            .iter()
            .map(|m| m.parse::<SyntheticModel>().map(|m| m.tendency()))
            .collect::<probcal::Result<_>>()?
    } else {
        DEFAULT_TENDENCIES.to_vec()
    };
    if m_min < 1 || m_min > m_max {
        return Err(usage(format!("invalid bin range {m_min}..{m_max}")));
    }
    if replicates == 0 {
        return Err(usage("replicates must be at least 1"));
    }

    eprintln!(
        "sweep-bins: seed={seed} n={n} m={m_min}..{m_max} replicates={replicates} \
         tendencies={tendencies:?}"
    );

    let ms: Vec<usize> = (m_min..=m_max).collect();
    let cells = compute_cells(&tendencies, &ms, n, replicates, seed)?;

    // Per-replicate CSV, ordered by (tendency, replicate, m).
    let mut csv = csv::Writer::from_writer(Vec::new());
    csv.write_record(["m", "tendency", "replicate", "ece", "abs_balance"])?;
    for cell in &cells {
        for (m, ece) in ms.iter().zip(&cell.ece_by_m) {
            csv.write_record(&[
                m.to_string(),
                cell.tendency.to_string(),
                cell.replicate.to_string(),
                ece.to_string(),
                cell.abs_balance.to_string(),
            ])?;
        }
    }
    let csv_text = String::from_utf8(csv.into_inner()?)?;

    // Replicate-averaged series per tendency.
    let mut series = Vec::new();
    for &t in &tendencies {
        let of_t: Vec<&SweepCell> = cells.iter().filter(|c| c.tendency == t).collect();
        let count = of_t.len() as f64;
        let mean_ece: Vec<f64> = (0..ms.len())
            .map(|mi| of_t.iter().map(|c| c.ece_by_m[mi]).sum::<f64>() / count)
            .collect();
        let mean_bal = of_t.iter().map(|c| c.abs_balance).sum::<f64>() / count;
        series.push(Series {
            name: format!("ece:t={t}"),
            x: ms.iter().map(|&m| m as f64).collect(),
            y: mean_ece,
        });
        series.push(Series {
            name: format!("abs_balance:t={t}"),
            x: ms.iter().map(|&m| m as f64).collect(),
            y: vec![mean_bal; ms.len()],
        });
    }

    let provenance = Provenance::new(seed)
        .param("n", n)
        .param("m_min", m_min)
        .param("m_max", m_max)
        .param("replicates", replicates)
        .param("distribution", ProbDistribution::uniform())
        .param(
            "tendencies",
            tendencies
                .iter()
                .map(|t| t.to_string())
                .collect::<Vec<_>>()
                .join(";"),
        );
    let doc = ReportDocument {
        experiment: "sweep-bins".into(),
        provenance,
        rows: Vec::new(),
        series,
    };

    match stdout_format(&args.common) {
        OutputFormat::Json => print!("{}", doc.to_json_string()?),
        OutputFormat::Csv => print!("{csv_text}"),
    }
    if let Some(dir) = args.common.out.as_deref().or(config.out.as_deref()) {
        write_out(dir, "sweep_bins.json", &doc.to_json_string()?)?;
        write_out(dir, "sweep_bins.csv", &csv_text)?;
    }
    Ok(())
}

/// Evaluates every (tendency, replicate) pair; replicate r draws its batch
/// under `derive_seed(seed, r)`, so all tendencies of a replicate share the
/// same (p, y) pairs.
pub fn compute_cells(
    tendencies: &[f64],
    ms: &[usize],
    n: usize,
    replicates: usize,
    seed: u64,
) -> anyhow::Result<Vec<SweepCell>> {
    let uniform = ProbDistribution::uniform();
    let mut jobs = Vec::new();
    for &t in tendencies {
        for r in 0..replicates {
            jobs.push((t, r));
        }
    }
    let cells = jobs
        .into_par_iter()
        .map(|(t, r)| -> probcal::Result<SweepCell> {
            let model = SyntheticModel::confidence_biased(t)?;
            let batch = generate_batch(&uniform, &model, n, derive_seed(seed, r as u64))?;
            let abs_balance = score_balance(&batch.predictions)?.abs();
            let ece_by_m = ms
                .iter()
                .map(|&m| score_ece(&batch.predictions, m))
                .collect::<probcal::Result<Vec<f64>>>()?;
            Ok(SweepCell {
                tendency: t,
                replicate: r,
                abs_balance,
                ece_by_m,
            })
        })
        .collect::<probcal::Result<Vec<_>>>()?;
    Ok(cells)
}
