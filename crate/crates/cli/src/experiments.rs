//! The four experiment drivers. Each has a `*_on` variant that takes an
//! in-memory dataset pair; the plain variant loads files named in the
//! configuration first.

use std::time::Instant;

use ldfm_core::evaluation::DistanceTable;
use ldfm_core::{
    apply_pca, corrupt_labels, fit, fit_pca_with, fit_with_frozen_labels, load_mulan_pair, reconstruction_error,
    DatasetPair, DenseMatrix, LdfmConfig, LdfmModel, MetricsReport, MlknnModel, PcaOptions,
};
use log::{info, warn};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{ExperimentConfig, Selector};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    FeatureCurve,
    Reconstruct,
    MissingLabels,
    Sweep,
}

impl ExperimentKind {
    pub fn file_stem(self) -> &'static str {
        match self {
            ExperimentKind::FeatureCurve => "feature_curve",
            ExperimentKind::Reconstruct => "reconstruction",
            ExperimentKind::MissingLabels => "missing_labels",
            ExperimentKind::Sweep => "sweep",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub hamming_loss: f64,
    pub average_precision: f64,
    pub micro_f1: f64,
}

impl From<MetricsReport> for Metrics {
    fn from(r: MetricsReport) -> Self {
        Self {
            hamming_loss: r.hamming_loss,
            average_precision: r.average_precision,
            micro_f1: r.micro_f1,
        }
    }
}

impl Metrics {
    fn mean(items: &[Metrics]) -> Metrics {
        let n = items.len() as f64;
        Metrics {
            hamming_loss: items.iter().map(|m| m.hamming_loss).sum::<f64>() / n,
            average_precision: items.iter().map(|m| m.average_precision).sum::<f64>() / n,
            micro_f1: items.iter().map(|m| m.micro_f1).sum::<f64>() / n,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub feature_count: usize,
    #[serde(flatten)]
    pub metrics: Metrics,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReconstructionErrors {
    /// `‖X − WᵀY‖/‖X‖` on training data with the logical labels.
    pub train_logical: f64,
    /// Same with the learned numeric labels.
    pub train_numeric: f64,
    /// Test data with its logical labels.
    pub test_logical: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MissingLabelPoint {
    pub proportion: f64,
    pub feature_count: usize,
    /// Numeric labels pinned to the corrupted logical labels.
    pub base: Metrics,
    /// Full alternating fit on the corrupted labels.
    pub ldfm: Metrics,
}

/// One run. `config` is narrowed to the single λ, iteration cap and seed
/// used, so it reproduces the run exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub experiment: ExperimentKind,
    pub dataset: String,
    pub config: ExperimentConfig,
    pub seed: u64,
    /// Feature dimension after preprocessing.
    pub input_dim: usize,
    pub iterations_run: usize,
    pub objective_trace: Vec<f64>,
    /// Feature order used by the curve, best first.
    pub ranking: Vec<usize>,
    pub curve: Vec<CurvePoint>,
    pub reconstruction: Option<ReconstructionErrors>,
    pub missing_labels: Vec<MissingLabelPoint>,
    /// Not part of the result; ignored by [`RunRecord::same_result`].
    pub wall_time_seconds: f64,
}

impl RunRecord {
    fn new(kind: ExperimentKind, data: &PreparedData, config: &ExperimentConfig, seed: u64) -> Self {
        Self {
            experiment: kind,
            dataset: data.name.clone(),
            config: config.clone(),
            seed,
            input_dim: data.x_train.nrows(),
            iterations_run: 0,
            objective_trace: Vec::new(),
            ranking: Vec::new(),
            curve: Vec::new(),
            reconstruction: None,
            missing_labels: Vec::new(),
            wall_time_seconds: 0.0,
        }
    }

    fn with_model(mut self, model: &LdfmModel) -> Self {
        self.iterations_run = model.iterations_run;
        self.objective_trace = model.objective_trace.clone();
        self
    }

    /// Equality ignoring wall time.
    pub fn same_result(&self, other: &RunRecord) -> bool {
        let mut a = self.clone();
        a.wall_time_seconds = other.wall_time_seconds;
        &a == other
    }
}

/// Feature-major train and test matrices after preprocessing.
#[derive(Debug, Clone)]
pub struct PreparedData {
    pub name: String,
    pub x_train: DenseMatrix,
    pub y_train: DenseMatrix,
    pub x_test: DenseMatrix,
    pub y_test: DenseMatrix,
}

pub fn load(config: &ExperimentConfig) -> Result<DatasetPair, CliError> {
    for (flag, path) in [
        ("--train", &config.train),
        ("--test", &config.test),
        ("--labels-xml", &config.labels_xml),
    ] {
        if path.as_os_str().is_empty() {
            return Err(CliError::Usage(format!("{flag} is required")));
        }
    }
    info!("loading {}", config.train.display());
    Ok(load_mulan_pair(&config.train, &config.test, &config.labels_xml)?)
}

/// PCA fitted on the training split and applied to both; skipped when
/// `pca_variance` is 0.
pub fn prepare(pair: &DatasetPair, config: &ExperimentConfig) -> Result<PreparedData, CliError> {
    let (mut x_train, mut x_test) = (pair.train.features().clone(), pair.test.features().clone());
    if config.pca_variance > 0.0 {
        let options = PcaOptions {
            variance_retained: config.pca_variance,
            standardize: config.standardize,
        };
        let pca = fit_pca_with(&x_train, &options)?;
        info!(
            "{}: PCA keeps {} of {} dimensions",
            pair.name,
            pca.num_components(),
            pca.input_dim()
        );
        x_train = apply_pca(&pca, &x_train)?;
        x_test = apply_pca(&pca, &x_test)?;
    }
    Ok(PreparedData {
        name: pair.name.clone(),
        x_train,
        y_train: pair.train.labels().clone(),
        x_test,
        y_test: pair.test.labels().clone(),
    })
}

/// Drops counts above `dim`. When any are dropped, `dim` itself is
/// appended so the curve still ends at the full feature set.
pub fn effective_feature_counts(counts: &[usize], dim: usize) -> Vec<usize> {
    let mut kept: Vec<usize> = counts.iter().copied().filter(|&c| c <= dim).collect();
    if kept.len() < counts.len() {
        warn!("only {dim} features available; dropping larger feature counts");
        if kept.last() != Some(&dim) {
            kept.push(dim);
        }
    }
    kept
}

fn ldfm_config(config: &ExperimentConfig) -> LdfmConfig {
    LdfmConfig {
        lambda: config.lambda(),
        max_iterations: config.max_iter(),
        objective_tolerance: config.objective_tolerance,
    }
}

/// Seeded uniformly random feature order.
pub fn random_ranking(dim: usize, seed: u64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..dim).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    order
}

fn ldfm_ranking(model: &LdfmModel) -> Vec<usize> {
    model.rank_features().into_iter().map(|s| s.index).collect()
}

/// ML-KNN metrics on the first `c` ranked features for each `c` in
/// `counts` (ascending). Distances grow one feature at a time.
pub fn evaluate_curve(
    data: &PreparedData,
    train_labels: &DenseMatrix,
    ranking: &[usize],
    counts: &[usize],
    config: &ExperimentConfig,
) -> Result<Vec<CurvePoint>, CliError> {
    let (n, m) = (data.x_train.ncols(), data.x_test.ncols());
    let mut train_table = DistanceTable::zeros(n, n);
    let mut test_table = DistanceTable::zeros(m, n);
    let mut added = 0;
    let mut points = Vec::with_capacity(counts.len());
    for &count in counts {
        assert!(count <= ranking.len(), "feature count {count} exceeds ranking");
        for &f in &ranking[added..count] {
            let train_row = data.x_train.row(f);
            train_table.accumulate(train_row, train_row);
            test_table.accumulate(data.x_test.row(f), train_row);
        }
        added = count;
        let x = data.x_train.select_rows(&ranking[..count]);
        let model =
            MlknnModel::train_with_distances(&x, train_labels, config.k_neighbors, config.smoothing, &train_table)?;
        let pred = model.predict_with_distances(&test_table)?;
        let metrics = MetricsReport::evaluate(&pred.scores, &pred.predictions, &data.y_test)?;
        points.push(CurvePoint {
            feature_count: count,
            metrics: metrics.into(),
        });
    }
    Ok(points)
}

fn narrowed(config: &ExperimentConfig, lambda: f64, max_iter: usize, seed: u64) -> ExperimentConfig {
    ExperimentConfig {
        lambdas: vec![lambda],
        max_iterations: vec![max_iter],
        seeds: vec![seed],
        ..config.clone()
    }
}

fn feature_curve_single(data: &PreparedData, config: &ExperimentConfig, seed: u64) -> Result<RunRecord, CliError> {
    let start = Instant::now();
    let dim = data.x_train.nrows();
    let counts = effective_feature_counts(&config.feature_counts, dim);
    let mut record = RunRecord::new(ExperimentKind::FeatureCurve, data, config, seed);
    let ranking = match config.selector {
        Selector::Ldfm => {
            let model = fit(&data.x_train, &data.y_train, &ldfm_config(config))?;
            record = record.with_model(&model);
            ldfm_ranking(&model)
        }
        Selector::Random => random_ranking(dim, seed),
    };
    record.curve = evaluate_curve(data, &data.y_train, &ranking, &counts, config)?;
    record.ranking = ranking;
    record.wall_time_seconds = start.elapsed().as_secs_f64();
    Ok(record)
}

/// ML-KNN quality against the number of selected features. The LDFM
/// selector is deterministic, so it yields one record; the random selector
/// yields one record per seed.
pub fn run_feature_curve_on(pair: &DatasetPair, config: &ExperimentConfig) -> Result<Vec<RunRecord>, CliError> {
    config.validate()?;
    let data = prepare(pair, config)?;
    let seeds: &[u64] = match config.selector {
        Selector::Ldfm => &config.seeds[..1],
        Selector::Random => &config.seeds,
    };
    seeds
        .par_iter()
        .map(|&seed| {
            let cfg = narrowed(config, config.lambda(), config.max_iter(), seed);
            feature_curve_single(&data, &cfg, seed)
        })
        .collect()
}

pub fn run_feature_curve(config: &ExperimentConfig) -> Result<Vec<RunRecord>, CliError> {
    run_feature_curve_on(&load(config)?, config)
}

/// The three relative reconstruction errors of one fit.
pub fn run_reconstruction_on(pair: &DatasetPair, config: &ExperimentConfig) -> Result<Vec<RunRecord>, CliError> {
    config.validate()?;
    let start = Instant::now();
    let data = prepare(pair, config)?;
    let model = fit(&data.x_train, &data.y_train, &ldfm_config(config))?;
    let seed = config.seeds[0];
    let cfg = narrowed(config, config.lambda(), config.max_iter(), seed);
    let mut record = RunRecord::new(ExperimentKind::Reconstruct, &data, &cfg, seed).with_model(&model);
    record.reconstruction = Some(ReconstructionErrors {
        train_logical: reconstruction_error(&data.x_train, &model.w, &data.y_train)?,
        train_numeric: reconstruction_error(&data.x_train, &model.w, &model.y_numeric)?,
        test_logical: reconstruction_error(&data.x_test, &model.w, &data.y_test)?,
    });
    record.ranking = ldfm_ranking(&model);
    record.wall_time_seconds = start.elapsed().as_secs_f64();
    Ok(vec![record])
}

pub fn run_reconstruction(config: &ExperimentConfig) -> Result<Vec<RunRecord>, CliError> {
    run_reconstruction_on(&load(config)?, config)
}

/// Both arms on one corrupted copy of the training labels.
fn missing_labels_arms(
    data: &PreparedData,
    pair: &DatasetPair,
    config: &ExperimentConfig,
    proportion: f64,
    seed: u64,
    feature_count: usize,
) -> Result<(Metrics, Metrics), CliError> {
    let corrupted = corrupt_labels(&pair.train, proportion, seed)?;
    let y = corrupted.labels();
    let fit_cfg = ldfm_config(config);
    let base = fit_with_frozen_labels(&data.x_train, y, &fit_cfg)?;
    debug_assert_eq!(&base.y_numeric, y);
    let full = fit(&data.x_train, y, &fit_cfg)?;
    let arm = |model: &LdfmModel| -> Result<Metrics, CliError> {
        let ranking = ldfm_ranking(model);
        let points = evaluate_curve(data, y, &ranking, &[feature_count], config)?;
        Ok(points[0].metrics)
    };
    Ok((arm(&base)?, arm(&full)?))
}

/// The largest configured count below `dim`. At `dim` itself every ranking
/// selects the same set, so the two arms could not differ.
pub fn missing_labels_feature_count(counts: &[usize], dim: usize) -> usize {
    match counts.iter().copied().filter(|&c| c < dim).max() {
        Some(c) => c,
        None => {
            warn!("no configured feature count below {dim}; both arms will use every feature");
            dim
        }
    }
}

/// Base versus LDFM with a proportion of positive training labels removed,
/// evaluated at [`missing_labels_feature_count`] and averaged over
/// the seeds. Test labels stay intact.
pub fn run_missing_labels_on(pair: &DatasetPair, config: &ExperimentConfig) -> Result<Vec<RunRecord>, CliError> {
    config.validate()?;
    let start = Instant::now();
    let data = prepare(pair, config)?;
    let feature_count = missing_labels_feature_count(&config.feature_counts, data.x_train.nrows());
    let jobs: Vec<(usize, u64)> = (0..config.missing_proportions.len())
        .flat_map(|p| config.seeds.iter().map(move |&s| (p, s)))
        .collect();
    let results: Vec<(Metrics, Metrics)> = jobs
        .par_iter()
        .map(|&(p, seed)| missing_labels_arms(&data, pair, config, config.missing_proportions[p], seed, feature_count))
        .collect::<Result<_, _>>()?;
    let per_p = config.seeds.len();
    let points = config
        .missing_proportions
        .iter()
        .enumerate()
        .map(|(p, &proportion)| {
            let chunk = &results[p * per_p..(p + 1) * per_p];
            let base: Vec<Metrics> = chunk.iter().map(|r| r.0).collect();
            let ldfm: Vec<Metrics> = chunk.iter().map(|r| r.1).collect();
            MissingLabelPoint {
                proportion,
                feature_count,
                base: Metrics::mean(&base),
                ldfm: Metrics::mean(&ldfm),
            }
        })
        .collect();
    let cfg = ExperimentConfig {
        lambdas: vec![config.lambda()],
        max_iterations: vec![config.max_iter()],
        ..config.clone()
    };
    let mut record = RunRecord::new(ExperimentKind::MissingLabels, &data, &cfg, config.seeds[0]);
    record.missing_labels = points;
    record.wall_time_seconds = start.elapsed().as_secs_f64();
    Ok(vec![record])
}

pub fn run_missing_labels(config: &ExperimentConfig) -> Result<Vec<RunRecord>, CliError> {
    run_missing_labels_on(&load(config)?, config)
}

/// A full feature curve for every (λ, iteration cap) pair in the
/// configuration, in λ-major order.
pub fn run_sweep_on(pair: &DatasetPair, config: &ExperimentConfig) -> Result<Vec<RunRecord>, CliError> {
    config.validate()?;
    let data = prepare(pair, config)?;
    let seed = config.seeds[0];
    let grid: Vec<(f64, usize)> = config
        .lambdas
        .iter()
        .flat_map(|&l| config.max_iterations.iter().map(move |&t| (l, t)))
        .collect();
    grid.par_iter()
        .map(|&(lambda, max_iter)| {
            let cfg = narrowed(config, lambda, max_iter, seed);
            let mut record = feature_curve_single(&data, &cfg, seed)?;
            record.experiment = ExperimentKind::Sweep;
            Ok(record)
        })
        .collect()
}

pub fn run_sweep(config: &ExperimentConfig) -> Result<Vec<RunRecord>, CliError> {
    run_sweep_on(&load(config)?, config)
}
