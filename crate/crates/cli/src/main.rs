use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ldfm_cli::config::parse_config_file;
use ldfm_cli::{
    emit_results, run_feature_curve, run_missing_labels, run_reconstruction, run_sweep, CliError, ExperimentConfig,
    ExperimentKind,
};
use log::info;

#[derive(Parser)]
#[command(
    name = "ldfm",
    version,
    about = "Label-driven feature selection experiments on Mulan datasets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// ML-KNN metrics against the number of selected features.
    FeatureCurve(CommonArgs),
    /// Relative reconstruction errors of one fit.
    Reconstruct(CommonArgs),
    /// Base versus LDFM with positive training labels removed.
    MissingLabels(CommonArgs),
    /// Feature curves over a grid of lambda and iteration caps.
    Sweep(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Flat `key = value` settings file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    train: Option<String>,
    #[arg(long)]
    test: Option<String>,
    /// Mulan XML label header.
    #[arg(long = "labels-xml")]
    labels_xml: Option<String>,
    /// Trade-off weight; a comma list for `sweep`.
    #[arg(long)]
    lambda: Option<String>,
    /// Iteration cap; a comma list for `sweep`.
    #[arg(long = "max-iter")]
    max_iter: Option<String>,
    /// Relative objective decrease that stops the fit; 0 runs every iteration.
    #[arg(long)]
    tolerance: Option<String>,
    /// Variance PCA keeps; 0 disables PCA.
    #[arg(long = "pca-variance")]
    pca_variance: Option<String>,
    /// Scale features to unit variance before PCA.
    #[arg(long)]
    standardize: bool,
    /// Feature counts, e.g. `1..100` or `10,20,50`.
    #[arg(long)]
    features: Option<String>,
    /// Seed list for corruption and the random selector.
    #[arg(long, alias = "seed")]
    seeds: Option<String>,
    /// Proportions of positive training labels to remove.
    #[arg(long)]
    missing: Option<String>,
    /// `ldfm` or `random`.
    #[arg(long)]
    selector: Option<String>,
    #[arg(long = "k-neighbors")]
    k_neighbors: Option<String>,
    #[arg(long)]
    smoothing: Option<String>,
    /// Output directory.
    #[arg(long)]
    out: Option<String>,
    /// `csv` or `json`.
    #[arg(long)]
    format: Option<String>,
}

impl CommonArgs {
    fn flag_values(&self) -> BTreeMap<String, String> {
        let pairs = [
            ("train", &self.train),
            ("test", &self.test),
            ("labels-xml", &self.labels_xml),
            ("lambda", &self.lambda),
            ("max-iter", &self.max_iter),
            ("tolerance", &self.tolerance),
            ("pca-variance", &self.pca_variance),
            ("features", &self.features),
            ("seeds", &self.seeds),
            ("missing", &self.missing),
            ("selector", &self.selector),
            ("k-neighbors", &self.k_neighbors),
            ("smoothing", &self.smoothing),
            ("out", &self.out),
            ("format", &self.format),
        ];
        let mut values: BTreeMap<String, String> = pairs
            .into_iter()
            .filter_map(|(k, v)| v.as_ref().map(|v| (k.to_string(), v.clone())))
            .collect();
        if self.standardize {
            values.insert("standardize".into(), "true".into());
        }
        values
    }

    fn resolve(&self, kind: ExperimentKind) -> Result<ExperimentConfig, CliError> {
        let mut config = ExperimentConfig::default();
        if kind == ExperimentKind::Sweep {
            config = config.with_sweep_grid();
        }
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
            config = config.apply(&parse_config_file(&text)?)?;
        }
        config = config.apply(&self.flag_values())?;
        config.validate()?;
        Ok(config)
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let (kind, args) = match &cli.command {
        Command::FeatureCurve(a) => (ExperimentKind::FeatureCurve, a),
        Command::Reconstruct(a) => (ExperimentKind::Reconstruct, a),
        Command::MissingLabels(a) => (ExperimentKind::MissingLabels, a),
        Command::Sweep(a) => (ExperimentKind::Sweep, a),
    };
    let config = args.resolve(kind)?;
    let records = match kind {
        ExperimentKind::FeatureCurve => run_feature_curve(&config)?,
        ExperimentKind::Reconstruct => run_reconstruction(&config)?,
        ExperimentKind::MissingLabels => run_missing_labels(&config)?,
        ExperimentKind::Sweep => run_sweep(&config)?,
    };
    for path in emit_results(kind, &records, &config.output_dir, config.format)? {
        info!("wrote {}", path.display());
        println!("{}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
