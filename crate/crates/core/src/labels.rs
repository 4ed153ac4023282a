//! Label co-occurrence structure: the Jaccard correlation between label
//! rows, and the numeric label matrix it induces.

use thiserror::Error;

use crate::linalg::DenseMatrix;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LabelError {
    #[error("label matrix entry ({row}, {col}) = {value} is not 0 or 1")]
    NonBinaryInput { row: usize, col: usize, value: f64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

/// Symmetric `k×k` matrix of Jaccard similarities, entries in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix(DenseMatrix);

impl CorrelationMatrix {
    pub fn values(&self) -> &DenseMatrix {
        &self.0
    }

    pub fn into_inner(self) -> DenseMatrix {
        self.0
    }

    pub fn num_labels(&self) -> usize {
        self.0.nrows()
    }
}

pub(crate) fn check_binary(y: &DenseMatrix) -> Result<(), LabelError> {
    match y.as_slice().iter().position(|&v| v != 0.0 && v != 1.0) {
        None => Ok(()),
        Some(pos) => Err(LabelError::NonBinaryInput {
            row: pos / y.ncols(),
            col: pos % y.ncols(),
            value: y.as_slice()[pos],
        }),
    }
}

/// `C_jl = |y_j ∧ y_l| / (|y_j| + |y_l| − |y_j ∧ y_l|)` over label rows of a
/// binary `k×n` matrix. Pairs of never-active labels get 0, except on the
/// diagonal where every label gets 1.
pub fn jaccard_correlation(y: &DenseMatrix) -> Result<CorrelationMatrix, LabelError> {
    check_binary(y)?;
    let k = y.nrows();
    let intersections = y.matmul_transpose(y);
    let counts: Vec<f64> = (0..k).map(|j| y.row(j).iter().sum()).collect();
    let c = DenseMatrix::from_fn(k, k, |j, l| {
        if j == l {
            return 1.0;
        }
        let inter = intersections[(j, l)];
        let union = counts[j] + counts[l] - inter;
        if union > 0.0 {
            inter / union
        } else {
            0.0
        }
    });
    Ok(CorrelationMatrix(c))
}

/// Initial numeric labels `C·Y` (`k×n`): each label accumulates the
/// correlation mass of the instance's active labels.
pub fn init_numeric_labels(y: &DenseMatrix, c: &CorrelationMatrix) -> Result<DenseMatrix, LabelError> {
    if c.num_labels() != y.nrows() {
        return Err(LabelError::DimensionMismatch(format!(
            "correlation is {k}x{k} but labels have {} rows",
            y.nrows(),
            k = c.num_labels()
        )));
    }
    Ok(c.values().matmul(y))
}
