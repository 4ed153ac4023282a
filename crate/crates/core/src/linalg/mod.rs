//! Dense matrix primitives and the structured linear solvers behind the
//! alternating optimizer.
//!
//! Both optimizer steps reduce to Sylvester equations `PW + WQ = R`. When `P`
//! and `Q` are symmetric positive semidefinite the equation diagonalizes in
//! the two eigenbases, which is the production path
//! ([`solve_sylvester_sympsd`]). [`solve_sylvester_kron`] solves the same
//! equation through its vectorized Kronecker form and exists to validate the
//! fast path on small instances.

mod eigen;
mod matrix;
mod solve;

pub use eigen::{sym_eigen, SymEigen};
pub(crate) use matrix::dot;
pub use matrix::DenseMatrix;
pub use solve::{default_pencil_eps, solve_spd, solve_sylvester_kron, solve_sylvester_sympsd, SylvesterRightFactor};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("expected {expected} entries, found {found}")]
    InvalidLength { expected: usize, found: usize },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not symmetric (max asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },
    #[error("matrix has eigenvalue {eigenvalue:e} below -{eps:e}, expected positive semidefinite")]
    NotPositiveSemidefinite { eigenvalue: f64, eps: f64 },
    #[error("symmetric eigensolver did not converge")]
    ConvergenceFailure,
    #[error("Sylvester pencil is singular: smallest eigenvalue sum {min_sum:e} <= {eps:e}")]
    SingularPencil { min_sum: f64, eps: f64 },
    #[error("Kronecker system of size {size} exceeds the guard of {limit}")]
    TooLarge { size: usize, limit: usize },
    #[error("linear system is singular")]
    SingularSystem,
    #[error("matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}
