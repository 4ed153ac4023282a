//! Experiment harness around `ldfm-core`: configuration, the four
//! experiment drivers, and result files.

pub mod config;
pub mod error;
pub mod experiments;
pub mod output;

pub use config::{ExperimentConfig, OutputFormat, Selector};
pub use error::CliError;
pub use experiments::{
    evaluate_curve, prepare, random_ranking, run_feature_curve, run_feature_curve_on, run_missing_labels,
    run_missing_labels_on, run_reconstruction, run_reconstruction_on, run_sweep, run_sweep_on, CurvePoint,
    ExperimentKind, Metrics, MissingLabelPoint, PreparedData, ReconstructionErrors, RunRecord,
};
pub use output::{emit_results, read_json_records};
