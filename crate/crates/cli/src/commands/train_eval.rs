//! `probcal train-eval`: fit the logistic estimator and report test-set
//! calibration, either on snapshot CSV files or on generated synthetic
//! snapshots with known ground truth.

use probcal::trainer::{
    generate_snapshots, load_dataset, split, train, SnapshotDataset, TimeProfile, TrainConfig,
};
use probcal::{
    derive_seed, expected_score_quadrature, full_report, true_ece_analytic, QuadratureSpec,
    ScoringRule, SyntheticModel,
};

use crate::args::{OutputFormat, TrainEvalArgs};
use crate::commands::{load_config, stdout_format};
use crate::config::{resolve, resolve_opt};
use crate::report::{
    histogram, metric_report_csv, write_out, ConditionRow, Provenance, ReferenceValues,
    ReportDocument, HISTOGRAM_BINS,
};
use crate::{usage, DEFAULT_BINS, DEFAULT_SEED};

const DEFAULT_N: usize = 100_000;
const DEFAULT_TRAIN_FRACTION: f64 = 0.6;
const DEFAULT_PROFILE: TimeProfile = TimeProfile::Mid;

pub fn run(args: TrainEvalArgs) -> anyhow::Result<()> {
    let config = load_config(&args.common)?;
    let seed = resolve(args.common.seed, config.seed, DEFAULT_SEED);
    let bins = resolve(args.common.bins, config.bins, DEFAULT_BINS);
    let train_cfg = TrainConfig {
        learning_rate: resolve(args.learning_rate, config.learning_rate, 0.1),
        max_iters: resolve(args.max_iters, config.max_iters, 10_000),
        tolerance: resolve(args.tolerance, config.tolerance, 1e-10),
        l2: resolve(args.l2, config.l2, 0.0),
        seed,
    };

    // File mode when either file flag is present; both are then required.
    let (train_ds, test_ds, condition, profile) =
        if args.train_file.is_some() || args.test_file.is_some() {
            let train_path = args
                .train_file
                .as_deref()
                .ok_or_else(|| usage("--train-file is required with --test-file"))?;
            let test_path = args
                .test_file
                .as_deref()
                .ok_or_else(|| usage("--test-file is required with --train-file"))?;
            let train_ds = load_dataset(train_path)?;
            let test_ds = load_dataset(test_path)?;
            let condition = format!(
                "files:{}|{}",
                train_path.file_name().unwrap_or_default().to_string_lossy(),
                test_path.file_name().unwrap_or_default().to_string_lossy()
            );
            (train_ds, test_ds, condition, None)
        } else {
            let profile: TimeProfile = resolve_opt(args.profile.clone(), config.profile.clone())
                .map(|s| s.parse())
                .transpose()?
                .unwrap_or(DEFAULT_PROFILE);
            let n = resolve(args.n, config.n, DEFAULT_N);
            let fraction = resolve(
                args.train_fraction,
                config.train_fraction,
                DEFAULT_TRAIN_FRACTION,
            );
            let ds = generate_snapshots(n, profile, seed)?;
            let (train_ds, test_ds) = split(&ds, fraction, derive_seed(seed, 1))?;
            (
                train_ds,
                test_ds,
                format!("profile:{profile}"),
                Some(profile),
            )
        };

    eprintln!(
        "train-eval: seed={seed} condition={condition} train_rows={} test_rows={}",
        train_ds.len(),
        test_ds.len()
    );

    let model = train(&train_ds, &train_cfg)?;
    if !model.standardization.dropped.is_empty() {
        let names: Vec<&str> = model
            .standardization
            .dropped
            .iter()
            .map(|&j| train_ds.feature_names()[j].as_str())
            .collect();
        eprintln!(
            "warning: dropped zero-variance features: {}",
            names.join(", ")
        );
    }

    let preds = model.predict_set(&test_ds)?;
    let report = full_report(&preds, bins)?;
    let oracle_true_ece = oracle_error(&test_ds, &preds);

    // In profile mode the optimal model under the profile's condition is the
    // target the estimator should approach.
    let reference = profile
        .map(|p| -> anyhow::Result<ReferenceValues> {
            let dist = p.distribution();
            let optimal = SyntheticModel::optimal();
            let quad = QuadratureSpec::default();
            Ok(ReferenceValues {
                method: "quadrature".into(),
                accuracy: expected_score_quadrature(ScoringRule::Accuracy, &dist, &optimal, &quad)?,
                brier: expected_score_quadrature(ScoringRule::Brier, &dist, &optimal, &quad)?,
                balance: expected_score_quadrature(ScoringRule::Balance, &dist, &optimal, &quad)?,
                true_ece: true_ece_analytic(&dist, &optimal, &quad)?,
            })
        })
        .transpose()?;

    let p_hats: Vec<f64> = preds.iter().map(|p| p.p_hat()).collect();
    let mut series = vec![histogram("hist:p_hat:test", &p_hats, HISTOGRAM_BINS)];
    if let Some(truth) = test_ds.true_p() {
        series.push(histogram("hist:true_p:test", truth, HISTOGRAM_BINS));
    }

    let provenance = Provenance::new(seed)
        .param("condition", &condition)
        .param("bins", bins)
        .param("train_rows", train_ds.len())
        .param("test_rows", test_ds.len())
        .param("learning_rate", train_cfg.learning_rate)
        .param("max_iters", train_cfg.max_iters)
        .param("tolerance", train_cfg.tolerance)
        .param("l2", train_cfg.l2)
        .param("iterations", model.meta.iterations)
        .param("final_loss", model.meta.final_loss)
        .param("converged", model.meta.converged);
    let doc = ReportDocument {
        experiment: "train-eval".into(),
        provenance,
        rows: vec![ConditionRow {
            condition,
            seed,
            report: report.clone(),
            reference,
            oracle_true_ece,
        }],
        series,
    };

    match stdout_format(&args.common) {
        OutputFormat::Json => print!("{}", doc.to_json_string()?),
        OutputFormat::Csv => print!("{}", metric_report_csv(&report)?),
    }
    if let Some(dir) = args.common.out.as_deref().or(config.out.as_deref()) {
        write_out(dir, "train_eval.json", &doc.to_json_string()?)?;
        write_out(dir, "train_eval_rows.csv", &doc.rows_to_csv()?)?;
        write_out(dir, "train_eval_hist.csv", &doc.series_to_csv()?)?;
        let mut model_json = serde_json::to_string_pretty(&model)?;
        model_json.push('\n');
        write_out(dir, "model.json", &model_json)?;
    }
    Ok(())
}

/// Mean |p_hat - true_p| when the test set carries the generator's truth.
fn oracle_error(ds: &SnapshotDataset, preds: &probcal::PredictionSet) -> Option<f64> {
    let truth = ds.true_p()?;
    let total: f64 = truth
        .iter()
        .zip(preds.iter())
        .map(|(t, p)| (p.p_hat() - t).abs())
        .sum();
    Some(total / truth.len() as f64)
}
