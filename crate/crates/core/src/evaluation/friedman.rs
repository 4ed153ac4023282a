use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::linalg::DenseMatrix;

use super::EvalError;

/// Which direction of a metric is better.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    HigherIsBetter,
    LowerIsBetter,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FriedmanResult {
    pub statistic: f64,
    pub p_value: f64,
    /// Mean rank per method; rank 1 is best.
    pub mean_ranks: Vec<f64>,
}

/// Friedman chi-square test over a `methods × datasets` table. Methods are
/// ranked within each dataset (ties share the average rank) and the
/// statistic `12/(N·k·(k+1)) · Σ_j (R_j − N(k+1)/2)²` is referred to a
/// chi-square distribution with `k − 1` degrees of freedom.
pub fn friedman_test(results: &DenseMatrix, orientation: Orientation) -> Result<FriedmanResult, EvalError> {
    let (k, n) = results.shape();
    if k < 2 || n < 2 {
        return Err(EvalError::TooFewSamples {
            methods: k,
            datasets: n,
        });
    }
    let mut rank_sums = vec![0.0; k];
    for col in 0..n {
        let values = results.column(col);
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by(|&a, &b| {
            let ord = values[a].total_cmp(&values[b]);
            match orientation {
                Orientation::HigherIsBetter => ord.reverse(),
                Orientation::LowerIsBetter => ord,
            }
        });
        let mut start = 0;
        while start < k {
            let mut end = start + 1;
            while end < k && values[order[end]] == values[order[start]] {
                end += 1;
            }
            // positions start..end share ranks start+1..=end
            let avg = (start + 1 + end) as f64 / 2.0;
            for &method in &order[start..end] {
                rank_sums[method] += avg;
            }
            start = end;
        }
    }
    let (kf, nf) = (k as f64, n as f64);
    let expected = nf * (kf + 1.0) / 2.0;
    let spread: f64 = rank_sums.iter().map(|r| (r - expected).powi(2)).sum();
    let statistic = 12.0 / (nf * kf * (kf + 1.0)) * spread;
    let p_value = ChiSquared::new(kf - 1.0)
        .map_err(|e| EvalError::InvalidParameter(e.to_string()))?
        .sf(statistic);
    Ok(FriedmanResult {
        statistic,
        p_value,
        mean_ranks: rank_sums.iter().map(|r| r / nf).collect(),
    })
}
