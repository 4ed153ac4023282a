//! The alternating encoder-decoder optimizer.
//!
//! Minimizes `‖X − WᵀỸ‖²_F + λ‖WX − Ỹ‖²_F` over the projection `W` (k×d)
//! and the numeric labels `Ỹ` (k×n). Each block has a closed-form
//! minimizer:
//!
//! * `W`: `ỸỸᵀ·W + W·(λXXᵀ) = (λ+1)·ỸXᵀ`, a Sylvester equation with two
//!   PSD operators.
//! * `Ỹ`: `(WWᵀ + λI)·Ỹ = (λ+1)·WX`, an SPD system.
//!
//! `Ỹ` starts at `C·Y` with `C` the Jaccard label correlation. There is no
//! separate `W` initialization: the first iteration begins by solving for
//! `W`.

use std::fmt::Write as _;

use thiserror::Error;

use crate::labels::{check_binary, init_numeric_labels, jaccard_correlation, LabelError};
use crate::linalg::{dot, solve_spd, DenseMatrix, LinalgError, SylvesterRightFactor};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LdfmError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Labels(#[from] LabelError),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("reference matrix has zero norm")]
    ZeroInput,
    #[error("model file line {line}: {message}")]
    Format { line: usize, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LdfmConfig {
    /// Weight of the encoder term `‖WX − Ỹ‖²`.
    pub lambda: f64,
    pub max_iterations: usize,
    /// Stop once an iteration lowers the objective by less than this
    /// fraction of its previous value. 0 runs all `max_iterations`.
    pub objective_tolerance: f64,
}

impl Default for LdfmConfig {
    fn default() -> Self {
        Self {
            lambda: 1.0,
            max_iterations: 100,
            objective_tolerance: 1e-6,
        }
    }
}

impl LdfmConfig {
    pub fn validate(&self) -> Result<(), LdfmError> {
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return Err(LdfmError::InvalidConfig(format!(
                "lambda must be positive, got {}",
                self.lambda
            )));
        }
        if self.max_iterations == 0 {
            return Err(LdfmError::InvalidConfig("max_iterations must be at least 1".into()));
        }
        if !(self.objective_tolerance >= 0.0 && self.objective_tolerance.is_finite()) {
            return Err(LdfmError::InvalidConfig(format!(
                "objective_tolerance must be nonnegative, got {}",
                self.objective_tolerance
            )));
        }
        Ok(())
    }
}

/// A fitted projection with its training-time numeric labels.
#[derive(Debug, Clone, PartialEq)]
pub struct LdfmModel {
    pub config: LdfmConfig,
    /// Encoder `k×d`; `wᵀ` decodes.
    pub w: DenseMatrix,
    /// Learned numeric labels `k×n` for the training instances.
    pub y_numeric: DenseMatrix,
    /// Objective after each completed iteration.
    pub objective_trace: Vec<f64>,
    pub iterations_run: usize,
}

/// Feature index with its projection norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeatureScore {
    pub index: usize,
    pub score: f64,
}

fn check_shapes(w: &DenseMatrix, y_numeric: &DenseMatrix, x: &DenseMatrix) -> Result<(), LdfmError> {
    let (k, d) = w.shape();
    if x.nrows() != d || y_numeric.shape() != (k, x.ncols()) {
        return Err(LdfmError::DimensionMismatch(format!(
            "W is {k}x{d}, Ỹ is {}x{}, X is {}x{}",
            y_numeric.nrows(),
            y_numeric.ncols(),
            x.nrows(),
            x.ncols()
        )));
    }
    Ok(())
}

fn check_lambda(lambda: f64) -> Result<(), LdfmError> {
    if lambda > 0.0 && lambda.is_finite() {
        Ok(())
    } else {
        Err(LdfmError::InvalidConfig(format!(
            "lambda must be positive, got {lambda}"
        )))
    }
}

/// `‖X − WᵀỸ‖²_F + λ‖WX − Ỹ‖²_F`
pub fn objective(w: &DenseMatrix, y_numeric: &DenseMatrix, x: &DenseMatrix, lambda: f64) -> Result<f64, LdfmError> {
    check_shapes(w, y_numeric, x)?;
    let decoder = x.sub(&w.transpose_matmul(y_numeric)).frobenius_norm_squared();
    let encoder = w.matmul(x).sub(y_numeric).frobenius_norm_squared();
    Ok(decoder + lambda * encoder)
}

fn right_factor(x: &DenseMatrix, lambda: f64) -> Result<SylvesterRightFactor, LdfmError> {
    Ok(SylvesterRightFactor::new(&x.matmul_transpose(x).scale(lambda))?)
}

fn update_w_with(
    factor: &SylvesterRightFactor,
    y_numeric: &DenseMatrix,
    x: &DenseMatrix,
    lambda: f64,
) -> Result<DenseMatrix, LdfmError> {
    let p = y_numeric.matmul_transpose(y_numeric);
    let r = y_numeric.matmul_transpose(x).scale(lambda + 1.0);
    Ok(factor.solve(&p, &r, None)?)
}

/// Exact minimizer over `W` with `Ỹ` fixed.
pub fn update_w(y_numeric: &DenseMatrix, x: &DenseMatrix, lambda: f64) -> Result<DenseMatrix, LdfmError> {
    check_lambda(lambda)?;
    if y_numeric.ncols() != x.ncols() {
        return Err(LdfmError::DimensionMismatch(format!(
            "Ỹ has {} columns, X has {}",
            y_numeric.ncols(),
            x.ncols()
        )));
    }
    update_w_with(&right_factor(x, lambda)?, y_numeric, x, lambda)
}

/// Exact minimizer over `Ỹ` with `W` fixed.
pub fn update_y(w: &DenseMatrix, x: &DenseMatrix, lambda: f64) -> Result<DenseMatrix, LdfmError> {
    check_lambda(lambda)?;
    if w.ncols() != x.nrows() {
        return Err(LdfmError::DimensionMismatch(format!(
            "W has {} columns, X has {} rows",
            w.ncols(),
            x.nrows()
        )));
    }
    let a = w.matmul_transpose(w).add_diagonal(lambda);
    let d = w.matmul(x).scale(lambda + 1.0);
    Ok(solve_spd(&a, &d)?)
}

fn check_inputs(x: &DenseMatrix, y: &DenseMatrix, config: &LdfmConfig) -> Result<(), LdfmError> {
    config.validate()?;
    if x.ncols() != y.ncols() {
        return Err(LdfmError::DimensionMismatch(format!(
            "X has {} instances, Y has {}",
            x.ncols(),
            y.ncols()
        )));
    }
    check_binary(y)?;
    Ok(())
}

fn plateaued(trace: &[f64], tolerance: f64) -> bool {
    match trace {
        [.., prev, last] if tolerance > 0.0 => prev - last < tolerance * prev.abs(),
        _ => false,
    }
}

/// Fits on `X` (`d×n`) and binary `Y` (`k×n`).
pub fn fit(x: &DenseMatrix, y: &DenseMatrix, config: &LdfmConfig) -> Result<LdfmModel, LdfmError> {
    check_inputs(x, y, config)?;
    let lambda = config.lambda;
    let correlation = jaccard_correlation(y)?;
    let mut y_numeric = init_numeric_labels(y, &correlation)?;
    let factor = right_factor(x, lambda)?;

    let mut w = DenseMatrix::zeros(y.nrows(), x.nrows());
    let mut trace = Vec::with_capacity(config.max_iterations);
    for _ in 0..config.max_iterations {
        w = update_w_with(&factor, &y_numeric, x, lambda)?;
        y_numeric = update_y(&w, x, lambda)?;
        trace.push(objective(&w, &y_numeric, x, lambda)?);
        if plateaued(&trace, config.objective_tolerance) {
            break;
        }
    }
    Ok(LdfmModel {
        config: *config,
        w,
        y_numeric,
        iterations_run: trace.len(),
        objective_trace: trace,
    })
}

/// Fits `W` with the numeric labels pinned to the logical labels `Y`: only
/// the `W` step is iterated, so `y_numeric == Y` on return.
pub fn fit_with_frozen_labels(x: &DenseMatrix, y: &DenseMatrix, config: &LdfmConfig) -> Result<LdfmModel, LdfmError> {
    check_inputs(x, y, config)?;
    let lambda = config.lambda;
    let factor = right_factor(x, lambda)?;
    let mut w = DenseMatrix::zeros(y.nrows(), x.nrows());
    let mut trace = Vec::with_capacity(config.max_iterations);
    for _ in 0..config.max_iterations {
        w = update_w_with(&factor, y, x, lambda)?;
        trace.push(objective(&w, y, x, lambda)?);
        if plateaued(&trace, config.objective_tolerance) {
            break;
        }
    }
    Ok(LdfmModel {
        config: *config,
        w,
        y_numeric: y.clone(),
        iterations_run: trace.len(),
        objective_trace: trace,
    })
}

/// `‖X − Wᵀ·labels‖_F / ‖X‖_F`
pub fn reconstruction_error(x: &DenseMatrix, w: &DenseMatrix, labels: &DenseMatrix) -> Result<f64, LdfmError> {
    let (k, d) = w.shape();
    if x.nrows() != d || labels.shape() != (k, x.ncols()) {
        return Err(LdfmError::DimensionMismatch(format!(
            "X is {}x{}, W is {k}x{d}, labels are {}x{}",
            x.nrows(),
            x.ncols(),
            labels.nrows(),
            labels.ncols()
        )));
    }
    let norm = x.frobenius_norm();
    if norm == 0.0 {
        return Err(LdfmError::ZeroInput);
    }
    Ok(x.sub(&w.transpose_matmul(labels)).frobenius_norm() / norm)
}

/// Features by the Euclidean norm of their column in `w`, highest first,
/// ties by ascending index.
pub fn rank_features(w: &DenseMatrix) -> Vec<FeatureScore> {
    let (k, d) = w.shape();
    let mut scores: Vec<FeatureScore> = (0..d)
        .map(|m| FeatureScore {
            index: m,
            score: (0..k).map(|j| w[(j, m)] * w[(j, m)]).sum::<f64>().sqrt(),
        })
        .collect();
    scores.sort_by(|a, b| b.score.total_cmp(&a.score).then(a.index.cmp(&b.index)));
    scores
}

const FORMAT_HEADER: &str = "ldfm-model v1";

impl LdfmModel {
    pub fn num_labels(&self) -> usize {
        self.w.nrows()
    }

    pub fn num_features(&self) -> usize {
        self.w.ncols()
    }

    /// `W·x`
    pub fn encode(&self, x: &[f64]) -> Result<Vec<f64>, LdfmError> {
        if x.len() != self.num_features() {
            return Err(LdfmError::DimensionMismatch(format!(
                "sample has {} features, model has {}",
                x.len(),
                self.num_features()
            )));
        }
        Ok((0..self.num_labels()).map(|j| dot(self.w.row(j), x)).collect())
    }

    /// `Wᵀ·y`
    pub fn decode(&self, y: &[f64]) -> Result<Vec<f64>, LdfmError> {
        if y.len() != self.num_labels() {
            return Err(LdfmError::DimensionMismatch(format!(
                "label vector has {} entries, model has {}",
                y.len(),
                self.num_labels()
            )));
        }
        Ok(self.w.transpose_matvec(y))
    }

    pub fn rank_features(&self) -> Vec<FeatureScore> {
        rank_features(&self.w)
    }

    /// Line-oriented text form; every real is written with 17 significant
    /// digits so [`LdfmModel::from_text`] restores it bit for bit.
    ///
    /// ```text
    /// ldfm-model v1
    /// lambda <real>
    /// max_iterations <count>
    /// objective_tolerance <real>
    /// iterations_run <count>
    /// w <k> <d>
    /// <k lines of d reals>
    /// y_numeric <k> <n>
    /// <k lines of n reals>
    /// objective_trace <len>
    /// <one line of len reals>
    /// ```
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{FORMAT_HEADER}");
        let _ = writeln!(out, "lambda {:.16e}", self.config.lambda);
        let _ = writeln!(out, "max_iterations {}", self.config.max_iterations);
        let _ = writeln!(out, "objective_tolerance {:.16e}", self.config.objective_tolerance);
        let _ = writeln!(out, "iterations_run {}", self.iterations_run);
        write_matrix(&mut out, "w", &self.w);
        write_matrix(&mut out, "y_numeric", &self.y_numeric);
        let _ = writeln!(out, "objective_trace {}", self.objective_trace.len());
        write_reals(&mut out, &self.objective_trace);
        out
    }

    pub fn from_text(text: &str) -> Result<Self, LdfmError> {
        let mut reader = LineReader {
            lines: text.lines().enumerate(),
            line: 0,
        };
        let header = reader.next_line()?;
        if header.trim() != FORMAT_HEADER {
            return Err(reader.error(format!("expected `{FORMAT_HEADER}`")));
        }
        let lambda = reader.keyed("lambda")?;
        let max_iterations = reader.keyed("max_iterations")?;
        let objective_tolerance = reader.keyed("objective_tolerance")?;
        let iterations_run = reader.keyed("iterations_run")?;
        let w = reader.matrix("w")?;
        let y_numeric = reader.matrix("y_numeric")?;
        let len: usize = reader.keyed("objective_trace")?;
        let objective_trace = if len == 0 { Vec::new() } else { reader.reals(len)? };

        let model = Self {
            config: LdfmConfig {
                lambda,
                max_iterations,
                objective_tolerance,
            },
            w,
            y_numeric,
            objective_trace,
            iterations_run,
        };
        if model.y_numeric.nrows() != model.w.nrows() {
            return Err(LdfmError::Format {
                line: reader.line,
                message: "w and y_numeric disagree on the label count".into(),
            });
        }
        Ok(model)
    }
}

fn write_reals(out: &mut String, values: &[f64]) {
    let line: Vec<String> = values.iter().map(|v| format!("{v:.16e}")).collect();
    out.push_str(&line.join(" "));
    out.push('\n');
}

fn write_matrix(out: &mut String, key: &str, m: &DenseMatrix) {
    let _ = writeln!(out, "{key} {} {}", m.nrows(), m.ncols());
    for i in 0..m.nrows() {
        write_reals(out, m.row(i));
    }
}

struct LineReader<'a, I: Iterator<Item = (usize, &'a str)>> {
    lines: I,
    line: usize,
}

impl<'a, I: Iterator<Item = (usize, &'a str)>> LineReader<'a, I> {
    fn error(&self, message: impl Into<String>) -> LdfmError {
        LdfmError::Format {
            line: self.line,
            message: message.into(),
        }
    }

    fn next_line(&mut self) -> Result<&'a str, LdfmError> {
        let (idx, line) = self.lines.next().ok_or_else(|| self.error("unexpected end of file"))?;
        self.line = idx + 1;
        Ok(line)
    }

    fn fields(&mut self, key: &str, count: usize) -> Result<Vec<&'a str>, LdfmError> {
        let line = self.next_line()?;
        let mut parts = line.split_whitespace();
        if parts.next() != Some(key) {
            return Err(self.error(format!("expected `{key}`")));
        }
        let values: Vec<&str> = parts.collect();
        if values.len() != count {
            return Err(self.error(format!("`{key}` takes {count} value(s)")));
        }
        Ok(values)
    }

    fn parse<T: std::str::FromStr>(&self, token: &str) -> Result<T, LdfmError> {
        token.parse().map_err(|_| self.error(format!("cannot parse `{token}`")))
    }

    fn keyed<T: std::str::FromStr>(&mut self, key: &str) -> Result<T, LdfmError> {
        let fields = self.fields(key, 1)?;
        self.parse(fields[0])
    }

    fn reals(&mut self, count: usize) -> Result<Vec<f64>, LdfmError> {
        let line = self.next_line()?;
        let values = line
            .split_whitespace()
            .map(|t| self.parse::<f64>(t))
            .collect::<Result<Vec<_>, _>>()?;
        if values.len() != count {
            return Err(self.error(format!("expected {count} values, found {}", values.len())));
        }
        Ok(values)
    }

    fn matrix(&mut self, key: &str) -> Result<DenseMatrix, LdfmError> {
        let dims = self.fields(key, 2)?;
        let rows: usize = self.parse(dims[0])?;
        let cols: usize = self.parse(dims[1])?;
        let mut data = Vec::with_capacity(rows * cols);
        for _ in 0..rows {
            if cols == 0 {
                self.next_line()?;
            } else {
                data.extend(self.reals(cols)?);
            }
        }
        DenseMatrix::new(rows, cols, data).map_err(|e| self.error(e.to_string()))
    }
}
