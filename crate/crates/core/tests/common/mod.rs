//! Independent reference implementations used as test oracles. None of these
//! share code paths with the library routines they check.
#![allow(dead_code)]

use isoforge_core::synth::Sampler;
use isoforge_core::Matrix;

pub fn random_matrix(n: usize, d: usize, seed: u64) -> Matrix {
    let mut s = Sampler::new(seed);
    let data = (0..n * d).map(|_| s.normal()).collect();
    Matrix::from_vec(n, d, data).unwrap()
}

/// Cyclic two-sided Jacobi eigen-solver for a symmetric matrix. Returns
/// eigenvalues in decreasing order and the matching unit eigenvectors.
pub fn jacobi_eigen(sym: &[Vec<f64>]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = sym.len();
    let mut a: Vec<Vec<f64>> = sym.to_vec();
    let mut v: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    for _sweep in 0..100 {
        let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| a[i][j] * a[i][j]).sum();
        let scale: f64 = (0..n).map(|i| a[i][i] * a[i][i]).sum::<f64>().max(1e-300);
        if off <= 1e-30 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let (vkp, vkq) = (v[k][p], v[k][q]);
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[j][j].partial_cmp(&a[i][i]).unwrap());
    let values = order.iter().map(|&i| a[i][i]).collect();
    let vectors = order.iter().map(|&i| (0..n).map(|k| v[k][i]).collect()).collect();
    (values, vectors)
}

/// `MᵀM / n` as nested vectors.
pub fn covariance(m: &Matrix) -> Vec<Vec<f64>> {
    let (n, d) = (m.rows(), m.cols());
    (0..d)
        .map(|i| (0..d).map(|j| (0..n).map(|r| m[(r, i)] * m[(r, j)]).sum::<f64>() / n as f64).collect())
        .collect()
}

/// Largest |a - s·b| over coordinates with the best sign s.
pub fn sign_aligned_diff(a: &[f64], b: &[f64]) -> f64 {
    let plus = a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    let minus = a.iter().zip(b).map(|(x, y)| (x + y).abs()).fold(0.0, f64::max);
    plus.min(minus)
}

/// Fractional ranks by counting: O(n²).
pub fn rank_by_counting(x: &[f64]) -> Vec<f64> {
    x.iter()
        .enumerate()
        .map(|(i, xi)| {
            let below = x.iter().filter(|&&v| v < *xi).count() as f64;
            let ties = x.iter().enumerate().filter(|&(j, &v)| j != i && v == *xi).count() as f64;
            1.0 + below + ties / 2.0
        })
        .collect()
}

pub fn naive_pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let syy: f64 = y.iter().map(|b| (b - my) * (b - my)).sum();
    sxy / (sxx * syy).sqrt()
}

pub fn spearman_oracle(x: &[f64], y: &[f64]) -> f64 {
    naive_pearson(&rank_by_counting(x), &rank_by_counting(y))
}

/// Double-double accumulation of a dot product (error-free transforms).
pub fn dd_dot(a: &[f64], b: &[f64]) -> f64 {
    let (mut hi, mut lo) = (0.0f64, 0.0f64);
    for (x, y) in a.iter().zip(b) {
        let p = x * y;
        let pe = x.mul_add(*y, -p);
        let s = hi + p;
        let bb = s - hi;
        let se = (hi - (s - bb)) + (p - bb);
        hi = s;
        lo += se + pe;
    }
    hi + lo
}

pub fn cosine_oracle(a: &[f64], b: &[f64]) -> f64 {
    dd_dot(a, b) / (dd_dot(a, a) * dd_dot(b, b)).sqrt()
}

/// `ln Σ exp(v)` summed directly; only valid at small magnitudes.
pub fn naive_log_sum_exp(v: &[f64]) -> f64 {
    v.iter().map(|x| x.exp()).sum::<f64>().ln()
}

pub fn brute_nearest(centroids: &Matrix, x: &[f64]) -> usize {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for c in 0..centroids.rows() {
        let d: f64 = centroids.row(c).iter().zip(x).map(|(a, b)| (a - b) * (a - b)).sum();
        if d < best_d {
            best_d = d;
            best = c;
        }
    }
    best
}

/// Agreement of two labelings up to a relabeling (greedy majority match).
pub fn labels_agree_up_to_permutation(a: &[usize], b: &[usize]) -> bool {
    use std::collections::HashMap;
    let mut map: HashMap<usize, usize> = HashMap::new();
    let mut rev: HashMap<usize, usize> = HashMap::new();
    for (&x, &y) in a.iter().zip(b) {
        if *map.entry(x).or_insert(y) != y || *rev.entry(y).or_insert(x) != x {
            return false;
        }
    }
    true
}
