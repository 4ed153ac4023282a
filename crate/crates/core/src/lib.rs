//! Multi-label feature selection through a linear encoder-decoder over a
//! learned numeric label space.
//!
//! The pipeline: load a Mulan dataset ([`dataset`]), optionally reduce it
//! with PCA ([`preprocess`]), fit the projection `W` by alternating exact
//! block updates ([`model`]), rank features by the norms of their columns in
//! `W`, and score the top-ranked features with ML-KNN ([`evaluation`]).

pub mod dataset;
pub mod evaluation;
pub mod labels;
pub mod linalg;
pub mod model;
pub mod preprocess;

pub use dataset::{
    corrupt_labels, load_mulan_pair, parse_arff, parse_label_header, DatasetError, DatasetPair, MultiLabelDataset,
};
pub use evaluation::{
    average_precision, friedman_test, hamming_loss, micro_f1, mlknn_predict, mlknn_train, EvalError, FriedmanResult,
    MetricsReport, MlknnModel, Orientation, Prediction,
};
pub use labels::{init_numeric_labels, jaccard_correlation, CorrelationMatrix, LabelError};
pub use linalg::{DenseMatrix, LinalgError, SymEigen};
pub use model::{
    fit, fit_with_frozen_labels, objective, rank_features, reconstruction_error, update_w, update_y, FeatureScore,
    LdfmConfig, LdfmError, LdfmModel,
};
pub use preprocess::{apply_pca, fit_pca, fit_pca_with, PcaError, PcaModel, PcaOptions};
