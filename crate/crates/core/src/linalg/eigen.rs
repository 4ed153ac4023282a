use nalgebra::SymmetricEigen;

use super::{DenseMatrix, LinalgError};

/// Eigendecomposition `M = V·diag(λ)·Vᵀ` of a symmetric matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SymEigen {
    /// Sorted ascending.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal columns, column `i` pairs with `eigenvalues[i]`.
    pub eigenvectors: DenseMatrix,
}

impl SymEigen {
    pub fn reconstruct(&self) -> DenseMatrix {
        let v = &self.eigenvectors;
        let scaled = DenseMatrix::from_fn(v.nrows(), v.ncols(), |i, j| v[(i, j)] * self.eigenvalues[j]);
        scaled.matmul_transpose(v)
    }
}

/// Symmetric eigendecomposition.
///
/// The input may carry asymmetry up to `tol·max|M|`; it is symmetrized as
/// `(M + Mᵀ)/2` before decomposing.
pub fn sym_eigen(m: &DenseMatrix, tol: f64) -> Result<SymEigen, LinalgError> {
    let (rows, cols) = m.shape();
    if rows != cols {
        return Err(LinalgError::NotSquare { rows, cols });
    }
    if rows == 0 {
        return Ok(SymEigen {
            eigenvalues: Vec::new(),
            eigenvectors: DenseMatrix::zeros(0, 0),
        });
    }
    let asymmetry = m.max_asymmetry();
    if asymmetry > tol * m.max_abs() {
        return Err(LinalgError::NotSymmetric { asymmetry });
    }

    let mut sym = m.to_nalgebra();
    for i in 0..rows {
        for j in (i + 1)..rows {
            let avg = 0.5 * (sym[(i, j)] + sym[(j, i)]);
            sym[(i, j)] = avg;
            sym[(j, i)] = avg;
        }
    }

    let max_iter = 1000 * rows.max(30);
    let eig = SymmetricEigen::try_new(sym, f64::EPSILON, max_iter).ok_or(LinalgError::ConvergenceFailure)?;

    let mut order: Vec<usize> = (0..rows).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]).then(a.cmp(&b)));

    let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    if eigenvalues.iter().any(|v| !v.is_finite()) {
        return Err(LinalgError::ConvergenceFailure);
    }
    let vecs = &eig.eigenvectors;
    let eigenvectors = DenseMatrix::from_fn(rows, rows, |i, j| vecs[(i, order[j])]);
    Ok(SymEigen {
        eigenvalues,
        eigenvectors,
    })
}
