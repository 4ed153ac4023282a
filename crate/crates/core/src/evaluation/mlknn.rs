//! ML-KNN: per-label Bayesian decisions over how many of an instance's K
//! nearest neighbors carry the label.

use std::cmp::Ordering;

use crate::linalg::DenseMatrix;

use super::EvalError;

/// Squared Euclidean distances between query columns and reference columns
/// of two feature-major matrices, accumulated one feature row at a time.
/// Building the table feature by feature in a fixed order gives the same bits
/// as building it in one go.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceTable {
    queries: usize,
    references: usize,
    data: Vec<f64>,
}

impl DistanceTable {
    pub fn zeros(queries: usize, references: usize) -> Self {
        Self {
            queries,
            references,
            data: vec![0.0; queries * references],
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.queries, self.references)
    }

    /// Adds one feature's squared differences.
    pub fn accumulate(&mut self, query_feature: &[f64], reference_feature: &[f64]) {
        assert_eq!(query_feature.len(), self.queries);
        assert_eq!(reference_feature.len(), self.references);
        for (q, &a) in query_feature.iter().enumerate() {
            let row = &mut self.data[q * self.references..(q + 1) * self.references];
            for (slot, &b) in row.iter_mut().zip(reference_feature) {
                let diff = a - b;
                *slot += diff * diff;
            }
        }
    }

    pub fn row(&self, q: usize) -> &[f64] {
        &self.data[q * self.references..(q + 1) * self.references]
    }
}

/// Distances between the columns of `queries` (`r×m`) and `references`
/// (`r×n`).
pub fn pairwise_sq_distances(queries: &DenseMatrix, references: &DenseMatrix) -> DistanceTable {
    assert_eq!(queries.nrows(), references.nrows(), "feature counts differ");
    let mut table = DistanceTable::zeros(queries.ncols(), references.ncols());
    for f in 0..queries.nrows() {
        table.accumulate(queries.row(f), references.row(f));
    }
    table
}

/// Indices of the `k` nearest references by (distance, index), optionally
/// skipping one index. Returned in no particular order.
fn nearest(distances: &[f64], k: usize, skip: Option<usize>, scratch: &mut Vec<usize>) {
    scratch.clear();
    scratch.extend((0..distances.len()).filter(|&i| Some(i) != skip));
    let cmp = |a: &usize, b: &usize| -> Ordering { distances[*a].total_cmp(&distances[*b]).then(a.cmp(b)) };
    if k < scratch.len() {
        scratch.select_nth_unstable_by(k, cmp);
        scratch.truncate(k);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MlknnModel {
    pub k_neighbors: usize,
    pub smoothing: f64,
    /// `r×n`
    pub train_features: DenseMatrix,
    /// `k×n`, binary.
    pub train_labels: DenseMatrix,
    pub prior_positive: Vec<f64>,
    /// `[label][c]`: probability that a positive training instance has
    /// exactly `c` positive neighbors.
    pub conditional_positive: Vec<Vec<f64>>,
    /// Same for negative training instances.
    pub conditional_negative: Vec<Vec<f64>>,
}

/// Label-major scores and binary predictions.
#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub scores: DenseMatrix,
    pub predictions: DenseMatrix,
}

fn check_binary(m: &DenseMatrix) -> Result<(), EvalError> {
    match m.as_slice().iter().position(|&v| v != 0.0 && v != 1.0) {
        None => Ok(()),
        Some(pos) => Err(EvalError::NonBinary {
            row: pos / m.ncols(),
            col: pos % m.ncols(),
            value: m.as_slice()[pos],
        }),
    }
}

/// Trains on `x` (`r×n`) and binary `y` (`k×n`) with Euclidean distance.
pub fn mlknn_train(
    x: &DenseMatrix,
    y: &DenseMatrix,
    k_neighbors: usize,
    smoothing: f64,
) -> Result<MlknnModel, EvalError> {
    let distances = pairwise_sq_distances(x, x);
    MlknnModel::train_with_distances(x, y, k_neighbors, smoothing, &distances)
}

pub fn mlknn_predict(model: &MlknnModel, x_test: &DenseMatrix) -> Result<Prediction, EvalError> {
    if x_test.nrows() != model.train_features.nrows() {
        return Err(EvalError::DimensionMismatch(format!(
            "test has {} features, model has {}",
            x_test.nrows(),
            model.train_features.nrows()
        )));
    }
    model.predict_with_distances(&pairwise_sq_distances(x_test, &model.train_features))
}

impl MlknnModel {
    /// Trains from a precomputed train-to-train table, which must equal
    /// `pairwise_sq_distances(x, x)`.
    pub fn train_with_distances(
        x: &DenseMatrix,
        y: &DenseMatrix,
        k_neighbors: usize,
        smoothing: f64,
        distances: &DistanceTable,
    ) -> Result<Self, EvalError> {
        let n = x.ncols();
        if y.ncols() != n {
            return Err(EvalError::DimensionMismatch(format!(
                "{n} feature columns but {} label columns",
                y.ncols()
            )));
        }
        if distances.shape() != (n, n) {
            return Err(EvalError::DimensionMismatch(
                "distance table does not match training set".into(),
            ));
        }
        if k_neighbors == 0 {
            return Err(EvalError::InvalidParameter("K must be at least 1".into()));
        }
        if !(smoothing > 0.0 && smoothing.is_finite()) {
            return Err(EvalError::InvalidParameter(format!(
                "smoothing must be positive, got {smoothing}"
            )));
        }
        if n <= k_neighbors {
            return Err(EvalError::TooFewInstances { n, k_neighbors });
        }
        check_binary(y)?;

        let labels = y.nrows();
        let mut pos_hist = vec![vec![0usize; k_neighbors + 1]; labels];
        let mut neg_hist = vec![vec![0usize; k_neighbors + 1]; labels];
        let mut neighbors = Vec::with_capacity(n);
        for i in 0..n {
            nearest(distances.row(i), k_neighbors, Some(i), &mut neighbors);
            for j in 0..labels {
                let row = y.row(j);
                let c = neighbors.iter().filter(|&&nb| row[nb] == 1.0).count();
                if row[i] == 1.0 {
                    pos_hist[j][c] += 1;
                } else {
                    neg_hist[j][c] += 1;
                }
            }
        }

        let s = smoothing;
        let kf = k_neighbors as f64;
        let normalize = |hist: &[usize]| -> Vec<f64> {
            let total: usize = hist.iter().sum();
            hist.iter()
                .map(|&h| (s + h as f64) / (s * (kf + 1.0) + total as f64))
                .collect()
        };
        let prior_positive = (0..labels)
            .map(|j| (s + y.row(j).iter().sum::<f64>()) / (2.0 * s + n as f64))
            .collect();
        Ok(Self {
            k_neighbors,
            smoothing,
            train_features: x.clone(),
            train_labels: y.clone(),
            prior_positive,
            conditional_positive: pos_hist.iter().map(|h| normalize(h)).collect(),
            conditional_negative: neg_hist.iter().map(|h| normalize(h)).collect(),
        })
    }

    /// Predicts from a test-to-train table, which must equal
    /// `pairwise_sq_distances(x_test, &self.train_features)`.
    pub fn predict_with_distances(&self, distances: &DistanceTable) -> Result<Prediction, EvalError> {
        let (m, n) = distances.shape();
        if n != self.train_features.ncols() {
            return Err(EvalError::DimensionMismatch(
                "distance table does not match training set".into(),
            ));
        }
        let labels = self.train_labels.nrows();
        let mut scores = DenseMatrix::zeros(labels, m);
        let mut predictions = DenseMatrix::zeros(labels, m);
        let mut neighbors = Vec::with_capacity(n);
        for q in 0..m {
            nearest(distances.row(q), self.k_neighbors, None, &mut neighbors);
            for j in 0..labels {
                let row = self.train_labels.row(j);
                let c = neighbors.iter().filter(|&&nb| row[nb] == 1.0).count();
                let prior = self.prior_positive[j];
                let pos = prior * self.conditional_positive[j][c];
                let neg = (1.0 - prior) * self.conditional_negative[j][c];
                scores[(j, q)] = pos / (pos + neg);
                predictions[(j, q)] = if pos > neg { 1.0 } else { 0.0 };
            }
        }
        Ok(Prediction { scores, predictions })
    }
}
