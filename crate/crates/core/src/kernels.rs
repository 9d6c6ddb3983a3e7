//! Reduction and similarity kernels.
//!
//! All reductions run in `f64` with a fixed summation order so repeated calls
//! on identical inputs are bit-identical.

use alloc::vec::Vec;

use crate::matrix::{dot, pairwise_sum, pairwise_sum_indexed, Matrix};
use crate::{Error, Result};

/// `ln Σ exp(vᵢ)` evaluated with the max-subtraction trick.
pub fn log_sum_exp(values: &[f64]) -> Result<f64> {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    if !max.is_finite() || values.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("log_sum_exp input must be finite".into()));
    }
    let shifted: Vec<f64> = values.iter().map(|&v| libm::exp(v - max)).collect();
    // the max term contributes exactly 1, so the sum is >= 1
    Ok(max + libm::log(pairwise_sum(&shifted)))
}

/// Column means of `m`, each computed with the pairwise tree over rows.
pub fn column_means(m: &Matrix) -> Result<Vec<f64>> {
    let n = m.rows();
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    Ok((0..m.cols())
        .map(|j| pairwise_sum_indexed(n, &|i| m[(i, j)]) / n as f64)
        .collect())
}

/// Subtracts the column mean from every row. Returns the centered matrix and
/// the mean.
pub fn center_columns(m: &Matrix) -> Result<(Matrix, Vec<f64>)> {
    let mean = column_means(m)?;
    let mut out = m.clone();
    for i in 0..out.rows() {
        for (v, mu) in out.row_mut(i).iter_mut().zip(&mean) {
            *v -= mu;
        }
    }
    Ok((out, mean))
}

/// Cosine of the angle between `a` and `b`, clamped to `[-1, 1]`.
pub fn cosine_similarity(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::Dim { expected: a.len(), found: b.len() });
    }
    let na = dot(a, a);
    let nb = dot(b, b);
    if na == 0.0 || nb == 0.0 {
        return Err(Error::ZeroVector);
    }
    let c = dot(a, b) / libm::sqrt(na * nb);
    Ok(c.clamp(-1.0, 1.0))
}

pub fn euclidean_distance(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::Dim { expected: a.len(), found: b.len() });
    }
    Ok(libm::sqrt(crate::matrix::squared_distance(a, b)))
}

/// Fractional ranks (1-based), ties receive the average of the ranks they
/// span.
pub fn fractional_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = alloc::vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // ranks start..end (0-based) -> average of (start+1)..=end
        let avg = (start + 1 + end) as f64 / 2.0;
        for &idx in &order[start..end] {
            ranks[idx] = avg;
        }
        start = end;
    }
    ranks
}

/// Pearson correlation. Errors if either side has zero variance.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::Dim { expected: x.len(), found: y.len() });
    }
    let n = x.len();
    if n < 2 {
        return Err(Error::DegenerateInput("correlation needs at least two observations"));
    }
    let mx = pairwise_sum(x) / n as f64;
    let my = pairwise_sum(y) / n as f64;
    let sxy = pairwise_sum_indexed(n, &|i| (x[i] - mx) * (y[i] - my));
    let sxx = pairwise_sum_indexed(n, &|i| (x[i] - mx) * (x[i] - mx));
    let syy = pairwise_sum_indexed(n, &|i| (y[i] - my) * (y[i] - my));
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::DegenerateInput("constant sequence"));
    }
    Ok((sxy / (libm::sqrt(sxx) * libm::sqrt(syy))).clamp(-1.0, 1.0))
}

/// Spearman rank correlation: Pearson correlation of fractional ranks.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::Dim { expected: x.len(), found: y.len() });
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("spearman input must be finite".into()));
    }
    pearson(&fractional_ranks(x), &fractional_ranks(y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::vec;

    #[test]
    fn lse_small_cases() {
        let v = log_sum_exp(&[0.0, 0.0]).unwrap();
        assert!((v - core::f64::consts::LN_2).abs() < 1e-15);
        let v = log_sum_exp(&[1000.0, 1000.0]).unwrap();
        assert!((v - (1000.0 + core::f64::consts::LN_2)).abs() < 1e-12);
        assert_eq!(log_sum_exp(&[]), Err(Error::EmptyInput));
        assert!(log_sum_exp(&[f64::NAN]).is_err());
        assert!(log_sum_exp(&[-1e4, 1e4]).unwrap().is_finite());
    }

    #[test]
    fn centering_hand_example() {
        let m = Matrix::from_rows(&[[1.0, 2.0], [3.0, 4.0]]).unwrap();
        let (c, mean) = center_columns(&m).unwrap();
        assert_eq!(mean, vec![2.0, 3.0]);
        assert_eq!(c.as_slice(), &[-1.0, -1.0, 1.0, 1.0]);
        let (c2, mean2) = center_columns(&c).unwrap();
        assert_eq!(mean2, vec![0.0, 0.0]);
        assert!(c2.max_abs_diff(&c) < 1e-12);
        assert_eq!(center_columns(&Matrix::zeros(0, 2)), Err(Error::EmptyInput));
    }

    #[test]
    fn cosine_cases() {
        assert_eq!(cosine_similarity(&[1.0, 2.0], &[1.0, 2.0]).unwrap(), 1.0);
        assert_eq!(cosine_similarity(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), 0.0);
        assert_eq!(cosine_similarity(&[0.0, 0.0], &[0.0, 1.0]), Err(Error::ZeroVector));
        assert!(matches!(cosine_similarity(&[1.0], &[0.0, 1.0]), Err(Error::Dim { .. })));
    }

    #[test]
    fn euclid_cases() {
        assert_eq!(euclidean_distance(&[0.0, 0.0], &[3.0, 4.0]).unwrap(), 5.0);
        assert_eq!(euclidean_distance(&[1.5, -2.0], &[1.5, -2.0]).unwrap(), 0.0);
        assert!(euclidean_distance(&[1.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn ranks_average_ties() {
        assert_eq!(fractional_ranks(&[1.0, 2.0, 2.0, 3.0]), vec![1.0, 2.5, 2.5, 4.0]);
        assert_eq!(fractional_ranks(&[5.0, 5.0, 5.0]), vec![2.0, 2.0, 2.0]);
    }

    #[test]
    fn spearman_cases() {
        let x = [0.3, -1.0, 2.5, 7.0, 1.1];
        assert!((spearman(&x, &x).unwrap() - 1.0).abs() < 1e-15);
        let asc = [1.0, 2.0, 3.0, 4.0];
        let desc = [4.0, 3.0, 2.0, 1.0];
        assert!((spearman(&asc, &desc).unwrap() + 1.0).abs() < 1e-15);
        assert!(matches!(spearman(&[1.0, 1.0, 1.0], &asc[..3]), Err(Error::DegenerateInput(_))));
        assert!(matches!(spearman(&asc, &asc[..3]), Err(Error::Dim { .. })));
    }
}
