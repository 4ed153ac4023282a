use super::{sym_eigen, DenseMatrix, LinalgError, SymEigen};

const SYMMETRY_TOL: f64 = 1e-10;

/// Default singularity guard for `PW + WQ = R`:
/// `1e-10 · (trace(P) + trace(Q)) / (k + d)`.
pub fn default_pencil_eps(p: &DenseMatrix, q: &DenseMatrix) -> f64 {
    let dims = (p.nrows() + q.nrows()).max(1) as f64;
    1e-10 * (p.trace() + q.trace()) / dims
}

fn require_square(m: &DenseMatrix) -> Result<usize, LinalgError> {
    if m.is_square() {
        Ok(m.nrows())
    } else {
        Err(LinalgError::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        })
    }
}

/// Clips roundoff negatives in `[-eps, 0)` to zero and rejects anything
/// further below.
fn clip_psd(eigenvalues: &mut [f64], eps: f64) -> Result<(), LinalgError> {
    for v in eigenvalues.iter_mut() {
        if *v < -eps {
            return Err(LinalgError::NotPositiveSemidefinite { eigenvalue: *v, eps });
        }
        if *v < 0.0 {
            *v = 0.0;
        }
    }
    Ok(())
}

/// The right-hand operator `Q` of `PW + WQ = R`, decomposed once so that
/// repeated solves with a changing `P` skip its eigendecomposition.
#[derive(Debug, Clone)]
pub struct SylvesterRightFactor {
    eig: SymEigen,
    trace: f64,
}

impl SylvesterRightFactor {
    pub fn new(q: &DenseMatrix) -> Result<Self, LinalgError> {
        require_square(q)?;
        Ok(Self {
            eig: sym_eigen(q, SYMMETRY_TOL)?,
            trace: q.trace(),
        })
    }

    pub fn dim(&self) -> usize {
        self.eig.eigenvalues.len()
    }

    /// Solves `PW + WQ = R` for symmetric PSD `P`. `eps` defaults to
    /// [`default_pencil_eps`].
    pub fn solve(&self, p: &DenseMatrix, r: &DenseMatrix, eps: Option<f64>) -> Result<DenseMatrix, LinalgError> {
        let k = require_square(p)?;
        let d = self.dim();
        if r.shape() != (k, d) {
            return Err(LinalgError::DimensionMismatch(format!(
                "R is {}x{}, expected {k}x{d}",
                r.nrows(),
                r.ncols()
            )));
        }
        let eps = eps.unwrap_or_else(|| 1e-10 * (p.trace() + self.trace) / ((k + d).max(1) as f64));

        let SymEigen {
            eigenvalues: mut lambda,
            eigenvectors: u,
        } = sym_eigen(p, SYMMETRY_TOL)?;
        let mut mu = self.eig.eigenvalues.clone();
        clip_psd(&mut lambda, eps)?;
        clip_psd(&mut mu, eps)?;

        if k == 0 || d == 0 {
            return Ok(DenseMatrix::zeros(k, d));
        }
        // both spectra are sorted ascending
        let min_sum = lambda[0] + mu[0];
        if min_sum <= eps {
            return Err(LinalgError::SingularPencil { min_sum, eps });
        }

        let v = &self.eig.eigenvectors;
        let mut s = u.transpose_matmul(r).matmul(v);
        for (i, &li) in lambda.iter().enumerate() {
            for (x, &mj) in s.row_mut(i).iter_mut().zip(&mu) {
                *x /= li + mj;
            }
        }
        Ok(u.matmul(&s).matmul_transpose(v))
    }
}

/// Solves `PW + WQ = R` for symmetric positive semidefinite `P` (k×k) and
/// `Q` (d×d) by diagonalizing both: with `P = UΛUᵀ` and `Q = VMVᵀ`,
/// `W = U·S·Vᵀ` where `S_ij = (UᵀRV)_ij / (λ_i + μ_j)`.
pub fn solve_sylvester_sympsd(
    p: &DenseMatrix,
    q: &DenseMatrix,
    r: &DenseMatrix,
    eps: Option<f64>,
) -> Result<DenseMatrix, LinalgError> {
    SylvesterRightFactor::new(q)?.solve(p, r, eps)
}

/// Solves `PW + WQ = R` through `(I_d ⊗ P + Qᵀ ⊗ I_k)·vec(W) = vec(R)` with a
/// dense pivoted elimination. Cubic in `k·d`; meant for small validation
/// instances, guarded by `k·d ≤ max_dim²`.
pub fn solve_sylvester_kron(
    p: &DenseMatrix,
    q: &DenseMatrix,
    r: &DenseMatrix,
    max_dim: usize,
) -> Result<DenseMatrix, LinalgError> {
    let k = require_square(p)?;
    let d = require_square(q)?;
    if r.shape() != (k, d) {
        return Err(LinalgError::DimensionMismatch(format!(
            "R is {}x{}, expected {k}x{d}",
            r.nrows(),
            r.ncols()
        )));
    }
    let size = k * d;
    let limit = max_dim.saturating_mul(max_dim);
    if size > limit {
        return Err(LinalgError::TooLarge { size, limit });
    }

    // vec() stacks columns: W_ij sits at i + j·k.
    let mut system = vec![0.0; size * size];
    for j in 0..d {
        for i in 0..k {
            let row = i + j * k;
            for i2 in 0..k {
                system[row * size + i2 + j * k] += p[(i, i2)];
            }
            for j2 in 0..d {
                system[row * size + i + j2 * k] += q[(j2, j)];
            }
        }
    }
    let mut rhs: Vec<f64> = (0..size).map(|idx| r[(idx % k.max(1), idx / k.max(1))]).collect();
    gaussian_solve(&mut system, &mut rhs, size)?;
    Ok(DenseMatrix::from_fn(k, d, |i, j| rhs[i + j * k]))
}

/// In-place Gaussian elimination with partial pivoting on a row-major
/// `n×n` system; the solution replaces `rhs`.
fn gaussian_solve(a: &mut [f64], rhs: &mut [f64], n: usize) -> Result<(), LinalgError> {
    let scale = a.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let threshold = scale * f64::EPSILON * n as f64;
    if scale == 0.0 && n > 0 {
        return Err(LinalgError::SingularSystem);
    }
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&x, &y| a[x * n + col].abs().total_cmp(&a[y * n + col].abs()).then(y.cmp(&x)))
            .expect("non-empty pivot range");
        let pivot = a[pivot_row * n + col];
        if pivot.abs() <= threshold {
            return Err(LinalgError::SingularSystem);
        }
        if pivot_row != col {
            for c in 0..n {
                a.swap(col * n + c, pivot_row * n + c);
            }
            rhs.swap(col, pivot_row);
        }
        for row in (col + 1)..n {
            let factor = a[row * n + col] / pivot;
            if factor == 0.0 {
                continue;
            }
            for c in col..n {
                a[row * n + c] -= factor * a[col * n + c];
            }
            rhs[row] -= factor * rhs[col];
        }
    }
    for row in (0..n).rev() {
        let mut acc = rhs[row];
        for c in (row + 1)..n {
            acc -= a[row * n + c] * rhs[c];
        }
        rhs[row] = acc / a[row * n + row];
    }
    Ok(())
}

/// Solves `A·X = B` for symmetric positive definite `A` by Cholesky.
pub fn solve_spd(a: &DenseMatrix, b: &DenseMatrix) -> Result<DenseMatrix, LinalgError> {
    let m = require_square(a)?;
    if b.nrows() != m {
        return Err(LinalgError::DimensionMismatch(format!(
            "B has {} rows, expected {m}",
            b.nrows()
        )));
    }
    if m == 0 {
        return Ok(DenseMatrix::zeros(0, b.ncols()));
    }
    let asymmetry = a.max_asymmetry();
    if asymmetry > SYMMETRY_TOL * a.max_abs() {
        return Err(LinalgError::NotSymmetric { asymmetry });
    }

    // lower factor, row-major
    let mut l = DenseMatrix::zeros(m, m);
    for j in 0..m {
        let mut diag = a[(j, j)];
        for c in 0..j {
            diag -= l[(j, c)] * l[(j, c)];
        }
        if diag.is_nan() || diag <= 0.0 {
            return Err(LinalgError::NotPositiveDefinite);
        }
        let ljj = diag.sqrt();
        l[(j, j)] = ljj;
        for i in (j + 1)..m {
            let mut v = a[(i, j)];
            for c in 0..j {
                v -= l[(i, c)] * l[(j, c)];
            }
            l[(i, j)] = v / ljj;
        }
    }

    let n = b.ncols();
    let mut x = b.clone();
    for col in 0..n {
        // L·z = b
        for i in 0..m {
            let mut v = x[(i, col)];
            for c in 0..i {
                v -= l[(i, c)] * x[(c, col)];
            }
            x[(i, col)] = v / l[(i, i)];
        }
        // Lᵀ·x = z
        for i in (0..m).rev() {
            let mut v = x[(i, col)];
            for c in (i + 1)..m {
                v -= l[(c, i)] * x[(c, col)];
            }
            x[(i, col)] = v / l[(i, i)];
        }
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> DenseMatrix {
        DenseMatrix::from_fn(rows, cols, |_, _| rng.random_range(-1.0..1.0))
    }

    fn random_psd(rng: &mut ChaCha8Rng, n: usize, rank: usize) -> DenseMatrix {
        let a = random(rng, n, rank);
        a.matmul_transpose(&a)
    }

    fn sylvester_residual(p: &DenseMatrix, q: &DenseMatrix, r: &DenseMatrix, w: &DenseMatrix) -> f64 {
        p.matmul(w).add(&w.matmul(q)).sub(r).frobenius_norm()
    }

    #[test]
    fn identity_operators_halve_rhs() {
        let r = DenseMatrix::from_rows(&[[2.0, 4.0], [6.0, 8.0]]).unwrap();
        let i2 = DenseMatrix::identity(2);
        let expected = DenseMatrix::from_rows(&[[1.0, 2.0], [3.0, 4.0]]).unwrap();
        let w = solve_sylvester_sympsd(&i2, &i2, &r, None).unwrap();
        assert!(w.sub(&expected).max_abs() < 1e-14);
        let w = solve_sylvester_kron(&i2, &i2, &r, 8).unwrap();
        assert!(w.sub(&expected).max_abs() < 1e-14);
    }

    #[test]
    fn diagonal_operators_solve_elementwise() {
        let p = DenseMatrix::from_diagonal(&[1.0, 2.0]);
        let q = DenseMatrix::from_diagonal(&[3.0]);
        let r = DenseMatrix::from_rows(&[[4.0], [10.0]]).unwrap();
        let w = solve_sylvester_sympsd(&p, &q, &r, None).unwrap();
        assert!((w[(0, 0)] - 1.0).abs() < 1e-14);
        assert!((w[(1, 0)] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn psd_solver_matches_kronecker_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let p = random_psd(&mut rng, 4, 4);
        let q = random_psd(&mut rng, 5, 5);
        let r = random(&mut rng, 4, 5);
        let fast = solve_sylvester_sympsd(&p, &q, &r, None).unwrap();
        let oracle = solve_sylvester_kron(&p, &q, &r, 32).unwrap();
        assert!(fast.sub(&oracle).frobenius_norm() <= 1e-8 * oracle.frobenius_norm().max(1.0));
        assert!(sylvester_residual(&p, &q, &r, &fast) <= 1e-8 * (r.frobenius_norm() + 1.0));
    }

    #[test]
    fn rank_deficient_p_with_definite_q_is_solvable() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let p = random_psd(&mut rng, 4, 1);
        let q = random_psd(&mut rng, 3, 3).add_diagonal(0.5);
        let r = random(&mut rng, 4, 3);
        let w = solve_sylvester_sympsd(&p, &q, &r, None).unwrap();
        assert!(sylvester_residual(&p, &q, &r, &w) <= 1e-8 * (r.frobenius_norm() + 1.0));
    }

    #[test]
    fn zero_operators_are_singular() {
        let z = DenseMatrix::zeros(2, 2);
        let r = DenseMatrix::identity(2);
        assert!(matches!(
            solve_sylvester_sympsd(&z, &z, &r, None),
            Err(LinalgError::SingularPencil { .. })
        ));
        assert!(matches!(
            solve_sylvester_kron(&z, &z, &r, 8),
            Err(LinalgError::SingularSystem)
        ));
    }

    #[test]
    fn kron_guard_rejects_large_instances() {
        let p = DenseMatrix::identity(5);
        let q = DenseMatrix::identity(6);
        let r = DenseMatrix::zeros(5, 6);
        assert!(matches!(
            solve_sylvester_kron(&p, &q, &r, 5),
            Err(LinalgError::TooLarge { size: 30, limit: 25 })
        ));
    }

    #[test]
    fn sympsd_rejects_indefinite_and_asymmetric_inputs() {
        let p = DenseMatrix::from_diagonal(&[1.0, -1.0]);
        let q = DenseMatrix::identity(1);
        let r = DenseMatrix::zeros(2, 1);
        assert!(matches!(
            solve_sylvester_sympsd(&p, &q, &r, None),
            Err(LinalgError::NotPositiveSemidefinite { .. })
        ));
        let p = DenseMatrix::from_rows(&[[1.0, 1.0], [0.0, 1.0]]).unwrap();
        assert!(matches!(
            solve_sylvester_sympsd(&p, &q, &r, None),
            Err(LinalgError::NotSymmetric { .. })
        ));
    }

    #[test]
    fn spd_identity_and_diagonal() {
        let b = DenseMatrix::from_rows(&[[1.5, -2.0], [0.25, 3.0]]).unwrap();
        assert_eq!(solve_spd(&DenseMatrix::identity(2), &b).unwrap(), b);
        let a = DenseMatrix::from_diagonal(&[2.0, 4.0]);
        let b = DenseMatrix::from_rows(&[[2.0], [8.0]]).unwrap();
        let x = solve_spd(&a, &b).unwrap();
        assert!((x[(0, 0)] - 1.0).abs() < 1e-15 && (x[(1, 0)] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn spd_random_residual() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = random_psd(&mut rng, 8, 8).add_diagonal(0.1);
        let b = random(&mut rng, 8, 3);
        let x = solve_spd(&a, &b).unwrap();
        assert!(a.matmul(&x).sub(&b).frobenius_norm() <= 1e-10 * (b.frobenius_norm() + 1.0));
    }

    #[test]
    fn spd_rejects_indefinite() {
        let a = DenseMatrix::from_diagonal(&[1.0, 0.0]);
        assert!(matches!(
            solve_spd(&a, &DenseMatrix::zeros(2, 1)),
            Err(LinalgError::NotPositiveDefinite)
        ));
    }
}
