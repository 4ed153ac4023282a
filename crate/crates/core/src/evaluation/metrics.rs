use crate::linalg::DenseMatrix;

use super::EvalError;

/// Scores for one evaluation run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricsReport {
    pub hamming_loss: f64,
    pub average_precision: f64,
    pub micro_f1: f64,
}

impl MetricsReport {
    /// All three metrics from label-major (`k×m`) scores, binary
    /// predictions, and ground truth.
    pub fn evaluate(scores: &DenseMatrix, predictions: &DenseMatrix, truth: &DenseMatrix) -> Result<Self, EvalError> {
        Ok(Self {
            hamming_loss: hamming_loss(predictions, truth)?,
            average_precision: average_precision(scores, truth)?,
            micro_f1: micro_f1(predictions, truth)?,
        })
    }
}

fn same_shape(a: &DenseMatrix, b: &DenseMatrix) -> Result<(), EvalError> {
    if a.shape() == b.shape() {
        Ok(())
    } else {
        Err(EvalError::ShapeMismatch {
            left: a.shape(),
            right: b.shape(),
        })
    }
}

fn binary(m: &DenseMatrix) -> Result<(), EvalError> {
    match m.as_slice().iter().position(|&v| v != 0.0 && v != 1.0) {
        None => Ok(()),
        Some(pos) => Err(EvalError::NonBinary {
            row: pos / m.ncols(),
            col: pos % m.ncols(),
            value: m.as_slice()[pos],
        }),
    }
}

/// Fraction of instance-label pairs predicted wrong.
pub fn hamming_loss(predictions: &DenseMatrix, truth: &DenseMatrix) -> Result<f64, EvalError> {
    same_shape(predictions, truth)?;
    binary(predictions)?;
    binary(truth)?;
    let total = truth.as_slice().len();
    if total == 0 {
        return Ok(0.0);
    }
    let wrong = predictions
        .as_slice()
        .iter()
        .zip(truth.as_slice())
        .filter(|(p, t)| p != t)
        .count();
    Ok(wrong as f64 / total as f64)
}

/// Mean over instances of the mean, over each relevant label `j`, of
/// `|{relevant l : rank(l) ≤ rank(j)}| / rank(j)`, with labels ranked by
/// descending score. A label's rank counts every label scoring at least as
/// high, so ties are resolved against the prediction. Instances without
/// relevant labels are skipped.
pub fn average_precision(scores: &DenseMatrix, truth: &DenseMatrix) -> Result<f64, EvalError> {
    same_shape(scores, truth)?;
    binary(truth)?;
    let (k, m) = truth.shape();
    let mut total = 0.0;
    let mut counted = 0usize;
    for i in 0..m {
        let relevant: Vec<usize> = (0..k).filter(|&j| truth[(j, i)] == 1.0).collect();
        if relevant.is_empty() {
            continue;
        }
        let mut sum = 0.0;
        for &j in &relevant {
            let s = scores[(j, i)];
            let rank = (0..k).filter(|&l| scores[(l, i)] >= s).count();
            let above = relevant.iter().filter(|&&l| scores[(l, i)] >= s).count();
            sum += above as f64 / rank as f64;
        }
        total += sum / relevant.len() as f64;
        counted += 1;
    }
    if counted == 0 {
        return Err(EvalError::NoRelevantLabels);
    }
    Ok(total / counted as f64)
}

/// `2·TP / (2·TP + FP + FN)` pooled over all pairs; 0 when nothing is
/// positive in either matrix.
pub fn micro_f1(predictions: &DenseMatrix, truth: &DenseMatrix) -> Result<f64, EvalError> {
    same_shape(predictions, truth)?;
    binary(predictions)?;
    binary(truth)?;
    let (mut tp, mut fp, mut fn_) = (0usize, 0usize, 0usize);
    for (&p, &t) in predictions.as_slice().iter().zip(truth.as_slice()) {
        match (p == 1.0, t == 1.0) {
            (true, true) => tp += 1,
            (true, false) => fp += 1,
            (false, true) => fn_ += 1,
            (false, false) => {}
        }
    }
    let denom = 2 * tp + fp + fn_;
    if denom == 0 {
        return Ok(0.0);
    }
    Ok((2 * tp) as f64 / denom as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: &[&[f64]]) -> DenseMatrix {
        DenseMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn hamming_cases() {
        let t = m(&[&[1.0, 0.0], &[0.0, 1.0]]);
        assert_eq!(hamming_loss(&t, &t).unwrap(), 0.0);
        assert_eq!(hamming_loss(&t.map(|v| 1.0 - v), &t).unwrap(), 1.0);
        assert_eq!(hamming_loss(&m(&[&[1.0, 0.0], &[0.0, 0.0]]), &t).unwrap(), 0.25);
        assert!(matches!(
            hamming_loss(&t, &DenseMatrix::zeros(1, 2)),
            Err(EvalError::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn average_precision_cases() {
        let truth = m(&[&[1.0, 0.0], &[0.0, 1.0], &[0.0, 1.0]]);
        let perfect = m(&[&[0.9, 0.1], &[0.2, 0.8], &[0.1, 0.7]]);
        assert_eq!(average_precision(&perfect, &truth).unwrap(), 1.0);

        let single = m(&[&[1.0], &[0.0]]);
        assert_eq!(average_precision(&m(&[&[0.2], &[0.9]]), &single).unwrap(), 0.5);
        assert_eq!(
            average_precision(&m(&[&[0.3], &[0.9]]), &m(&[&[1.0], &[1.0]])).unwrap(),
            1.0
        );

        // the second instance has no relevant labels and is skipped
        let truth = m(&[&[1.0, 0.0], &[0.0, 0.0]]);
        assert_eq!(average_precision(&m(&[&[0.2, 0.5], &[0.9, 0.5]]), &truth).unwrap(), 0.5);
        assert!(matches!(
            average_precision(&DenseMatrix::zeros(2, 2), &DenseMatrix::zeros(2, 2)),
            Err(EvalError::NoRelevantLabels)
        ));
    }

    #[test]
    fn micro_f1_cases() {
        let t = m(&[&[1.0, 0.0], &[0.0, 1.0]]);
        assert_eq!(micro_f1(&t, &t).unwrap(), 1.0);
        assert_eq!(micro_f1(&DenseMatrix::zeros(2, 2), &t).unwrap(), 0.0);
        // TP=2, FP=1, FN=1
        let truth = m(&[&[1.0, 1.0, 1.0, 0.0]]);
        let pred = m(&[&[1.0, 1.0, 0.0, 1.0]]);
        assert!((micro_f1(&pred, &truth).unwrap() - 4.0 / 6.0).abs() < 1e-15);
        assert_eq!(
            micro_f1(&DenseMatrix::zeros(2, 2), &DenseMatrix::zeros(2, 2)).unwrap(),
            0.0
        );
    }

    fn binary_matrix(k: usize, m: usize) -> impl Strategy<Value = DenseMatrix> {
        proptest::collection::vec(prop::bool::ANY, k * m)
            .prop_map(move |bits| DenseMatrix::new(k, m, bits.into_iter().map(|b| b as u8 as f64).collect()).unwrap())
    }

    proptest! {
        #[test]
        fn hamming_complement_sums_to_one(p in binary_matrix(3, 5), t in binary_matrix(3, 5)) {
            let flipped = p.map(|v| 1.0 - v);
            let total = hamming_loss(&p, &t).unwrap() + hamming_loss(&flipped, &t).unwrap();
            prop_assert!((total - 1.0).abs() < 1e-12);
        }

        #[test]
        fn average_precision_is_rank_based(
            t in binary_matrix(4, 6),
            raw in proptest::collection::vec(-5.0..5.0f64, 24),
        ) {
            prop_assume!(t.as_slice().contains(&1.0));
            let scores = DenseMatrix::new(4, 6, raw).unwrap();
            let transformed = scores.map(|v| (v * 0.5).exp() + 3.0);
            let a = average_precision(&scores, &t).unwrap();
            let b = average_precision(&transformed, &t).unwrap();
            prop_assert!((a - b).abs() < 1e-12);
            prop_assert!((0.0..=1.0).contains(&a));
        }

        #[test]
        fn micro_f1_ignores_consistent_permutations(p in binary_matrix(3, 4), t in binary_matrix(3, 4)) {
            let rows = [2, 0, 1];
            let cols = [3, 1, 0, 2];
            let pp = p.select_rows(&rows).select_columns(&cols);
            let tp = t.select_rows(&rows).select_columns(&cols);
            prop_assert_eq!(micro_f1(&p, &t).unwrap(), micro_f1(&pp, &tp).unwrap());
        }
    }
}
