//! Experiment configuration. Command-line flags and the config file share
//! one flat `key = value` vocabulary; flags override file values.
//!
//! Config file syntax: one `key = value` per line, `#` starts a comment.
//! Keys: `train`, `test`, `labels-xml`, `lambda`, `max-iter`, `tolerance`,
//! `pca-variance`, `standardize`, `features`, `seeds`, `missing`,
//! `selector`, `k-neighbors`, `smoothing`, `out`, `format`.

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::CliError;

pub const KEYS: &[&str] = &[
    "train",
    "test",
    "labels-xml",
    "lambda",
    "max-iter",
    "tolerance",
    "pca-variance",
    "standardize",
    "features",
    "seeds",
    "missing",
    "selector",
    "k-neighbors",
    "smoothing",
    "out",
    "format",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Selector {
    /// Rank by projection column norms of a fitted model.
    Ldfm,
    /// Uniformly random feature order, seeded.
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub train: PathBuf,
    pub test: PathBuf,
    pub labels_xml: PathBuf,
    /// Values of `lambda`; every command but `sweep` takes the first.
    pub lambdas: Vec<f64>,
    /// Values of the iteration cap; every command but `sweep` takes the first.
    pub max_iterations: Vec<usize>,
    pub objective_tolerance: f64,
    /// Fraction of variance PCA keeps; 0 disables PCA.
    pub pca_variance: f64,
    pub standardize: bool,
    pub feature_counts: Vec<usize>,
    pub seeds: Vec<u64>,
    pub missing_proportions: Vec<f64>,
    pub selector: Selector,
    pub k_neighbors: usize,
    pub smoothing: f64,
    pub output_dir: PathBuf,
    pub format: OutputFormat,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            train: PathBuf::new(),
            test: PathBuf::new(),
            labels_xml: PathBuf::new(),
            lambdas: vec![1.0],
            max_iterations: vec![100],
            objective_tolerance: 1e-6,
            pca_variance: 0.95,
            standardize: false,
            feature_counts: (1..=100).collect(),
            seeds: vec![0],
            missing_proportions: vec![0.2, 0.4, 0.6, 0.8],
            selector: Selector::Ldfm,
            k_neighbors: 10,
            smoothing: 1.0,
            output_dir: PathBuf::from("results"),
            format: OutputFormat::Csv,
        }
    }
}

impl ExperimentConfig {
    pub fn lambda(&self) -> f64 {
        self.lambdas[0]
    }

    pub fn max_iter(&self) -> usize {
        self.max_iterations[0]
    }

    /// The grid for `sweep`: λ ∈ {0.2, 0.4, …, 2} and the iteration cap in
    /// {1, 20, 40, …, 100}.
    pub fn with_sweep_grid(mut self) -> Self {
        self.lambdas = (1..=10).map(|i| i as f64 / 5.0).collect();
        self.max_iterations = std::iter::once(1).chain((1..=5).map(|i| 20 * i)).collect();
        self
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let usage = |m: String| Err(CliError::Usage(m));
        if self.lambdas.is_empty() || self.lambdas.iter().any(|&l| !(l > 0.0 && l.is_finite())) {
            return usage(format!("lambda values must be positive: {:?}", self.lambdas));
        }
        if self.max_iterations.is_empty() || self.max_iterations.contains(&0) {
            return usage("max-iter values must be at least 1".into());
        }
        if !(self.objective_tolerance >= 0.0) {
            return usage("tolerance must be nonnegative".into());
        }
        if !(0.0..=1.0).contains(&self.pca_variance) {
            return usage(format!("pca-variance must be in [0, 1], got {}", self.pca_variance));
        }
        if self.feature_counts.is_empty() || self.feature_counts.contains(&0) {
            return usage("features must list positive counts".into());
        }
        if self.feature_counts.windows(2).any(|w| w[0] >= w[1]) {
            return usage("feature counts must be strictly ascending".into());
        }
        if self.seeds.is_empty() {
            return usage("at least one seed is required".into());
        }
        if self.missing_proportions.iter().any(|p| !(0.0..=1.0).contains(p)) {
            return usage("missing proportions must be in [0, 1]".into());
        }
        if self.k_neighbors == 0 {
            return usage("k-neighbors must be at least 1".into());
        }
        if !(self.smoothing > 0.0) {
            return usage("smoothing must be positive".into());
        }
        Ok(())
    }

    /// Applies `key = value` settings on top of `self`.
    pub fn apply(mut self, values: &BTreeMap<String, String>) -> Result<Self, CliError> {
        for (key, value) in values {
            let value = value.trim();
            match key.as_str() {
                "train" => self.train = value.into(),
                "test" => self.test = value.into(),
                "labels-xml" => self.labels_xml = value.into(),
                "lambda" => self.lambdas = parse_list(key, value)?,
                "max-iter" => self.max_iterations = parse_list(key, value)?,
                "tolerance" => self.objective_tolerance = parse_one(key, value)?,
                "pca-variance" => self.pca_variance = parse_one(key, value)?,
                "standardize" => self.standardize = parse_one(key, value)?,
                "features" => self.feature_counts = parse_counts(value)?,
                "seeds" => self.seeds = parse_list(key, value)?,
                "missing" => self.missing_proportions = parse_list(key, value)?,
                "selector" => {
                    self.selector = match value {
                        "ldfm" => Selector::Ldfm,
                        "random" => Selector::Random,
                        other => return Err(CliError::Usage(format!("unknown selector `{other}`"))),
                    }
                }
                "k-neighbors" => self.k_neighbors = parse_one(key, value)?,
                "smoothing" => self.smoothing = parse_one(key, value)?,
                "out" => self.output_dir = value.into(),
                "format" => {
                    self.format = match value {
                        "csv" => OutputFormat::Csv,
                        "json" => OutputFormat::Json,
                        other => return Err(CliError::Usage(format!("unknown format `{other}`"))),
                    }
                }
                other => return Err(CliError::Usage(format!("unknown setting `{other}`"))),
            }
        }
        Ok(self)
    }
}

fn parse_one<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("invalid value `{value}` for {key}")))
}

fn parse_list<T: std::str::FromStr>(key: &str, value: &str) -> Result<Vec<T>, CliError> {
    value
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| parse_one(key, s))
        .collect()
}

/// `1..100` (inclusive), `5,10,20`, or a mix such as `1..10,20,50`.
pub fn parse_counts(value: &str) -> Result<Vec<usize>, CliError> {
    let mut out = Vec::new();
    for part in value.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if let Some((lo, hi)) = part.split_once("..") {
            let lo: usize = parse_one("features", lo)?;
            let hi: usize = parse_one("features", hi.trim_start_matches('='))?;
            if lo > hi {
                return Err(CliError::Usage(format!("empty feature range `{part}`")));
            }
            out.extend(lo..=hi);
        } else {
            out.push(parse_one("features", part)?);
        }
    }
    Ok(out)
}

/// Parses the flat config file format.
pub fn parse_config_file(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut values = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("config line {}: expected `key = value`", idx + 1)))?;
        let key = key.trim().replace('_', "-");
        if !KEYS.contains(&key.as_str()) {
            return Err(CliError::Usage(format!("config line {}: unknown key `{key}`", idx + 1)));
        }
        values.insert(key, value.trim().to_string());
    }
    Ok(values)
}
