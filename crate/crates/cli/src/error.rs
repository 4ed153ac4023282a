use ldfm_core::{DatasetError, EvalError, LdfmError, LinalgError, PcaError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Dataset(#[from] DatasetError),
    #[error(transparent)]
    Pca(#[from] PcaError),
    #[error(transparent)]
    Ldfm(#[from] LdfmError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("cannot write {path}: {message}")]
    Output { path: String, message: String },
}

impl CliError {
    /// 2 usage, 3 data, 4 numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Dataset(_) | CliError::Output { .. } => 3,
            CliError::Pca(PcaError::Linalg(_)) => 4,
            CliError::Pca(_) => 3,
            CliError::Ldfm(LdfmError::Linalg(_)) => 4,
            CliError::Ldfm(LdfmError::InvalidConfig(_)) => 2,
            CliError::Ldfm(_) => 3,
            CliError::Eval(
                EvalError::TooFewInstances { .. } | EvalError::NoRelevantLabels | EvalError::NonBinary { .. },
            ) => 3,
            CliError::Eval(_) => 4,
        }
    }
}

impl From<LinalgError> for CliError {
    fn from(e: LinalgError) -> Self {
        CliError::Ldfm(LdfmError::Linalg(e))
    }
}
