//! PCA fitted on training features, retaining a fraction of the variance.

use thiserror::Error;

use crate::linalg::{sym_eigen, DenseMatrix, LinalgError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PcaError {
    #[error("PCA needs at least 2 instances, got {0}")]
    InsufficientSamples(usize),
    #[error("variance_retained must be in (0, 1], got {0}")]
    InvalidVarianceRetained(f64),
    #[error("data has zero total variance")]
    DegenerateData,
    #[error("model expects {expected} features, input has {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PcaOptions {
    pub variance_retained: f64,
    /// Scale each centered feature to unit sample variance before fitting.
    pub standardize: bool,
}

impl Default for PcaOptions {
    fn default() -> Self {
        Self {
            variance_retained: 0.95,
            standardize: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PcaModel {
    pub mean: Vec<f64>,
    /// Per-feature divisor when fitted with standardization.
    pub scale: Option<Vec<f64>>,
    /// `d×r`, orthonormal columns in descending-variance order.
    pub components: DenseMatrix,
    pub explained_variance_ratio: Vec<f64>,
}

impl PcaModel {
    pub fn input_dim(&self) -> usize {
        self.mean.len()
    }

    pub fn num_components(&self) -> usize {
        self.components.ncols()
    }

    fn center(&self, x: &DenseMatrix) -> DenseMatrix {
        DenseMatrix::from_fn(x.nrows(), x.ncols(), |m, i| {
            let v = x[(m, i)] - self.mean[m];
            match &self.scale {
                Some(s) => v / s[m],
                None => v,
            }
        })
    }

    /// Maps `r×m` scores back to the input space.
    pub fn reconstruct(&self, z: &DenseMatrix) -> DenseMatrix {
        let back = self.components.matmul(z);
        DenseMatrix::from_fn(back.nrows(), back.ncols(), |m, i| {
            let v = match &self.scale {
                Some(s) => back[(m, i)] * s[m],
                None => back[(m, i)],
            };
            v + self.mean[m]
        })
    }
}

pub fn fit_pca(x: &DenseMatrix, variance_retained: f64) -> Result<PcaModel, PcaError> {
    fit_pca_with(
        x,
        &PcaOptions {
            variance_retained,
            standardize: false,
        },
    )
}

/// Fits on the `d×n` matrix `x` (features in rows). Keeps the smallest
/// number of leading components whose cumulative explained-variance ratio
/// reaches `variance_retained`.
pub fn fit_pca_with(x: &DenseMatrix, options: &PcaOptions) -> Result<PcaModel, PcaError> {
    let (d, n) = x.shape();
    if n < 2 {
        return Err(PcaError::InsufficientSamples(n));
    }
    let retained = options.variance_retained;
    if !(retained > 0.0 && retained <= 1.0) {
        return Err(PcaError::InvalidVarianceRetained(retained));
    }

    let mean: Vec<f64> = (0..d).map(|m| x.row(m).iter().sum::<f64>() / n as f64).collect();
    let scale = options.standardize.then(|| {
        (0..d)
            .map(|m| {
                let var = x.row(m).iter().map(|v| (v - mean[m]).powi(2)).sum::<f64>() / (n - 1) as f64;
                if var > 0.0 {
                    var.sqrt()
                } else {
                    1.0
                }
            })
            .collect::<Vec<_>>()
    });
    let mut model = PcaModel {
        mean,
        scale,
        components: DenseMatrix::zeros(d, 0),
        explained_variance_ratio: Vec::new(),
    };

    let centered = model.center(x);
    let covariance = centered.matmul_transpose(&centered).scale(1.0 / (n - 1) as f64);
    let eig = sym_eigen(&covariance, 1e-12)?;

    // descending; roundoff negatives count as zero variance
    let values: Vec<f64> = eig.eigenvalues.iter().rev().map(|v| v.max(0.0)).collect();
    let total: f64 = values.iter().sum();
    let largest = values.first().copied().unwrap_or(0.0);
    if !(total > 0.0) {
        return Err(PcaError::DegenerateData);
    }
    let noise_floor = 1e-12 * largest;

    let mut ratios = Vec::new();
    let mut cumulative = 0.0;
    for &v in &values {
        if v <= noise_floor {
            break;
        }
        let ratio = v / total;
        ratios.push(ratio);
        cumulative += ratio;
        if cumulative >= retained - 1e-12 {
            break;
        }
    }

    let r = ratios.len();
    let vecs = &eig.eigenvectors;
    let mut components = DenseMatrix::from_fn(d, r, |m, c| vecs[(m, d - 1 - c)]);
    for c in 0..r {
        let column = components.column(c);
        let pivot = column
            .iter()
            .enumerate()
            .fold(0, |best, (m, v)| if v.abs() > column[best].abs() { m } else { best });
        if column[pivot] < 0.0 {
            for m in 0..d {
                components[(m, c)] = -components[(m, c)];
            }
        }
    }
    model.components = components;
    model.explained_variance_ratio = ratios;
    Ok(model)
}

/// `componentsᵀ·(x − mean)` for a `d×m` matrix.
pub fn apply_pca(model: &PcaModel, x: &DenseMatrix) -> Result<DenseMatrix, PcaError> {
    if x.nrows() != model.input_dim() {
        return Err(PcaError::DimensionMismatch {
            expected: model.input_dim(),
            found: x.nrows(),
        });
    }
    Ok(model.components.transpose_matmul(&model.center(x)))
}
