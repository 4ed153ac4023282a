//! Result files. CSV output writes one table per experiment plus an
//! objective-trace table; JSON output writes the full records.
//!
//! | experiment      | table                 | columns |
//! |-----------------|-----------------------|---------|
//! | feature-curve   | `feature_curve.csv`   | seed, feature_count, hamming_loss, average_precision, micro_f1 |
//! | sweep           | `sweep.csv`           | lambda, max_iterations, seed, feature_count, hamming_loss, average_precision, micro_f1 |
//! | reconstruct     | `reconstruction.csv`  | dataset, lambda, max_iterations, iterations_run, train_logical, train_numeric, test_logical |
//! | missing-labels  | `missing_labels.csv`  | proportion, feature_count, arm, hamming_loss, average_precision, micro_f1 |
//! | all             | `<stem>_objective.csv`| lambda, max_iterations, seed, iteration, objective |

use std::fs;
use std::path::{Path, PathBuf};

use crate::config::OutputFormat;
use crate::experiments::{ExperimentKind, Metrics, RunRecord};
use crate::CliError;

fn output_error(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Output {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}

fn metric_fields(m: &Metrics) -> [String; 3] {
    [
        m.hamming_loss.to_string(),
        m.average_precision.to_string(),
        m.micro_f1.to_string(),
    ]
}

fn write_csv(path: &Path, header: &[&str], rows: Vec<Vec<String>>) -> Result<(), CliError> {
    let mut writer = csv::Writer::from_path(path).map_err(|e| output_error(path, e))?;
    writer.write_record(header).map_err(|e| output_error(path, e))?;
    for row in rows {
        writer.write_record(&row).map_err(|e| output_error(path, e))?;
    }
    writer.flush().map_err(|e| output_error(path, e))
}

fn main_table(kind: ExperimentKind, records: &[RunRecord]) -> (Vec<&'static str>, Vec<Vec<String>>) {
    const METRICS: [&str; 3] = ["hamming_loss", "average_precision", "micro_f1"];
    match kind {
        ExperimentKind::FeatureCurve => {
            let header = [&["seed", "feature_count"][..], &METRICS].concat();
            let rows = records
                .iter()
                .flat_map(|r| {
                    r.curve.iter().map(move |p| {
                        let mut row = vec![r.seed.to_string(), p.feature_count.to_string()];
                        row.extend(metric_fields(&p.metrics));
                        row
                    })
                })
                .collect();
            (header, rows)
        }
        ExperimentKind::Sweep => {
            let header = [&["lambda", "max_iterations", "seed", "feature_count"][..], &METRICS].concat();
            let rows = records
                .iter()
                .flat_map(|r| {
                    r.curve.iter().map(move |p| {
                        let mut row = vec![
                            r.config.lambda().to_string(),
                            r.config.max_iter().to_string(),
                            r.seed.to_string(),
                            p.feature_count.to_string(),
                        ];
                        row.extend(metric_fields(&p.metrics));
                        row
                    })
                })
                .collect();
            (header, rows)
        }
        ExperimentKind::Reconstruct => {
            let header = vec![
                "dataset",
                "lambda",
                "max_iterations",
                "iterations_run",
                "train_logical",
                "train_numeric",
                "test_logical",
            ];
            let rows = records
                .iter()
                .filter_map(|r| {
                    r.reconstruction.map(|e| {
                        vec![
                            r.dataset.clone(),
                            r.config.lambda().to_string(),
                            r.config.max_iter().to_string(),
                            r.iterations_run.to_string(),
                            e.train_logical.to_string(),
                            e.train_numeric.to_string(),
                            e.test_logical.to_string(),
                        ]
                    })
                })
                .collect();
            (header, rows)
        }
        ExperimentKind::MissingLabels => {
            let header = [&["proportion", "feature_count", "arm"][..], &METRICS].concat();
            let rows = records
                .iter()
                .flat_map(|r| r.missing_labels.iter())
                .flat_map(|p| {
                    [("base", &p.base), ("ldfm", &p.ldfm)].map(|(arm, m)| {
                        let mut row = vec![p.proportion.to_string(), p.feature_count.to_string(), arm.to_string()];
                        row.extend(metric_fields(m));
                        row
                    })
                })
                .collect();
            (header, rows)
        }
    }
}

fn objective_rows(records: &[RunRecord]) -> Vec<Vec<String>> {
    records
        .iter()
        .flat_map(|r| {
            r.objective_trace.iter().enumerate().map(move |(i, v)| {
                vec![
                    r.config.lambda().to_string(),
                    r.config.max_iter().to_string(),
                    r.seed.to_string(),
                    (i + 1).to_string(),
                    v.to_string(),
                ]
            })
        })
        .collect()
}

/// Writes the result files for `records` into `dir` and returns their
/// paths. An empty record list still produces header-only tables.
pub fn emit_results(
    kind: ExperimentKind,
    records: &[RunRecord],
    dir: &Path,
    format: OutputFormat,
) -> Result<Vec<PathBuf>, CliError> {
    fs::create_dir_all(dir).map_err(|e| output_error(dir, e))?;
    let stem = kind.file_stem();
    match format {
        OutputFormat::Csv => {
            let main = dir.join(format!("{stem}.csv"));
            let (header, rows) = main_table(kind, records);
            write_csv(&main, &header, rows)?;
            let objective = dir.join(format!("{stem}_objective.csv"));
            write_csv(
                &objective,
                &["lambda", "max_iterations", "seed", "iteration", "objective"],
                objective_rows(records),
            )?;
            Ok(vec![main, objective])
        }
        OutputFormat::Json => {
            let path = dir.join(format!("{stem}.json"));
            let text = serde_json::to_string_pretty(records).map_err(|e| output_error(&path, e))?;
            fs::write(&path, text).map_err(|e| output_error(&path, e))?;
            Ok(vec![path])
        }
    }
}

/// Reads records written by [`emit_results`] in JSON format.
pub fn read_json_records(path: &Path) -> Result<Vec<RunRecord>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| output_error(path, e))?;
    serde_json::from_str(&text).map_err(|e| output_error(path, e))
}
