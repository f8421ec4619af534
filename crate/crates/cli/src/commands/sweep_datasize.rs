//! `probcal sweep-datasize`: how fast the binned estimator and the absolute
//! balance score approach the analytic true calibration error as the data
//! size grows.

use probcal::{
    derive_seed, generate_batch, score_balance, score_ece, true_ece_analytic, ProbDistribution,
    QuadratureSpec, SyntheticModel,
};
use rayon::prelude::*;

use crate::args::{OutputFormat, SweepDatasizeArgs};
use crate::commands::{load_config, stdout_format};
use crate::config::resolve;
use crate::report::{write_out, Provenance, ReportDocument, Series};
use crate::{usage, DEFAULT_BINS, DEFAULT_SEED};

const DEFAULT_TENDENCY: f64 = 0.1;
const DEFAULT_SIZE_MIN: usize = 50;
const DEFAULT_SIZE_MAX: usize = 1000;
const DEFAULT_SIZE_STEP: usize = 50;
const DEFAULT_REPLICATES: usize = 100;

/// Mean absolute deviation from the analytic target, per size and metric.
pub struct SizePoint {
    pub size: usize,
    pub metric: &'static str,
    pub mean_abs_error: f64,
    /// Sample standard deviation across replicates; absent for a single
    /// replicate.
    pub std: Option<f64>,
}

pub fn run(args: SweepDatasizeArgs) -> anyhow::Result<()> {
    let config = load_config(&args.common)?;
    let seed = resolve(args.common.seed, config.seed, DEFAULT_SEED);
    let tendency = resolve(args.tendency, None, DEFAULT_TENDENCY);
    let size_min = resolve(args.size_min, config.size_min, DEFAULT_SIZE_MIN);
    let size_max = resolve(args.size_max, config.size_max, DEFAULT_SIZE_MAX);
    let size_step = resolve(args.size_step, config.size_step, DEFAULT_SIZE_STEP);
    let replicates = resolve(args.replicates, config.replicates, DEFAULT_REPLICATES);
    let bins = resolve(args.common.bins, config.bins, DEFAULT_BINS);

    if size_min < 2 || size_min > size_max || size_step == 0 {
        return Err(usage(format!(
            "invalid size range {size_min}..{size_max} step {size_step}"
        )));
    }
    if replicates == 0 {
        return Err(usage("replicates must be at least 1"));
    }

    let model = SyntheticModel::confidence_biased(tendency)?;
    let uniform = ProbDistribution::uniform();
    let target = true_ece_analytic(&uniform, &model, &QuadratureSpec::default())?;
    let sizes: Vec<usize> = (size_min..=size_max).step_by(size_step).collect();

    eprintln!(
        "sweep-datasize: seed={seed} sizes={size_min}..{size_max} step {size_step} \
         replicates={replicates} tendency={tendency} target={target}"
    );

    let points = compute_points(&sizes, &model, bins, replicates, seed, target)?;

    let mut csv = csv::Writer::from_writer(Vec::new());
    csv.write_record(["size", "metric", "mean_abs_error", "std"])?;
    for p in &points {
        csv.write_record(&[
            p.size.to_string(),
            p.metric.to_string(),
            p.mean_abs_error.to_string(),
            p.std.map(|s| s.to_string()).unwrap_or_default(),
        ])?;
    }
    let csv_text = String::from_utf8(csv.into_inner()?)?;

    let series_of = |metric: &str| Series {
        name: format!("mae:{metric}"),
        x: sizes.iter().map(|&s| s as f64).collect(),
        y: points
            .iter()
            .filter(|p| p.metric == metric)
            .map(|p| p.mean_abs_error)
            .collect(),
    };
    let provenance = Provenance::new(seed)
        .param("tendency", tendency)
        .param("target_true_ece", target)
        .param("bins", bins)
        .param("replicates", replicates)
        .param("distribution", uniform)
        .param("sizes", format!("{size_min}..{size_max}:{size_step}"));
    let doc = ReportDocument {
        experiment: "sweep-datasize".into(),
        provenance,
        rows: Vec::new(),
        series: vec![series_of("ece"), series_of("abs_balance")],
    };

    match stdout_format(&args.common) {
        OutputFormat::Json => print!("{}", doc.to_json_string()?),
        OutputFormat::Csv => print!("{csv_text}"),
    }
    if let Some(dir) = args.common.out.as_deref().or(config.out.as_deref()) {
        write_out(dir, "sweep_datasize.json", &doc.to_json_string()?)?;
        write_out(dir, "sweep_datasize.csv", &csv_text)?;
    }
    Ok(())
}

/// Replicate r of size index s runs under
/// `derive_seed(derive_seed(seed, s), r)`.
pub fn compute_points(
    sizes: &[usize],
    model: &SyntheticModel,
    bins: usize,
    replicates: usize,
    seed: u64,
    target: f64,
) -> anyhow::Result<Vec<SizePoint>> {
    let uniform = ProbDistribution::uniform();
    let per_size = sizes
        .par_iter()
        .enumerate()
        .map(|(si, &size)| -> probcal::Result<(Vec<f64>, Vec<f64>)> {
            let size_seed = derive_seed(seed, si as u64);
            let mut ece_errs = Vec::with_capacity(replicates);
            let mut bal_errs = Vec::with_capacity(replicates);
            for r in 0..replicates {
                let batch =
                    generate_batch(&uniform, model, size, derive_seed(size_seed, r as u64))?;
                let ece = score_ece(&batch.predictions, bins)?;
                let abs_bal = score_balance(&batch.predictions)?.abs();
                ece_errs.push((ece - target).abs());
                bal_errs.push((abs_bal - target).abs());
            }
            Ok((ece_errs, bal_errs))
        })
        .collect::<probcal::Result<Vec<_>>>()?;

    let mut points = Vec::with_capacity(sizes.len() * 2);
    for (size, (ece_errs, bal_errs)) in sizes.iter().zip(per_size) {
        for (metric, errs) in [("ece", ece_errs), ("abs_balance", bal_errs)] {
            let n = errs.len() as f64;
            let mean = errs.iter().sum::<f64>() / n;
            let std = if errs.len() > 1 {
                let var = errs.iter().map(|e| (e - mean) * (e - mean)).sum::<f64>() / (n - 1.0);
                Some(var.sqrt())
            } else {
                None
            };
            points.push(SizePoint {
                size: *size,
                metric,
                mean_abs_error: mean,
                std,
            });
        }
    }
    Ok(points)
}
