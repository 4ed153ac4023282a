//! The ML-KNN evaluator, multi-label metrics, and the Friedman rank test.

mod friedman;
mod metrics;
mod mlknn;

pub use friedman::{friedman_test, FriedmanResult, Orientation};
pub use metrics::{average_precision, hamming_loss, micro_f1, MetricsReport};
pub use mlknn::{mlknn_predict, mlknn_train, pairwise_sq_distances, DistanceTable, MlknnModel, Prediction};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error("ML-KNN with K={k_neighbors} needs more than {k_neighbors} training instances, got {n}")]
    TooFewInstances { n: usize, k_neighbors: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("shape mismatch: {left:?} vs {right:?}")]
    ShapeMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("entry ({row}, {col}) = {value} is not 0 or 1")]
    NonBinary { row: usize, col: usize, value: f64 },
    #[error("no instance has a relevant label")]
    NoRelevantLabels,
    #[error("need at least 2 methods and 2 datasets, got {methods}x{datasets}")]
    TooFewSamples { methods: usize, datasets: usize },
}
