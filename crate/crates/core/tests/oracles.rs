//! Library routines checked against independent brute-force oracles.

mod common;

use common::*;
use isoforge_core::analysis::sentence_embedding;
use isoforge_core::isotropy::partition_log;
use isoforge_core::kernels::{center_columns, cosine_similarity, log_sum_exp, spearman};
use isoforge_core::synth::Sampler;
use isoforge_core::{kmeans_assign, kmeans_fit, principal_components, EmbeddingStore, Matrix, TokenMeta};

#[test]
fn log_sum_exp_matches_naive_sum() {
    let mut s = Sampler::new(42);
    let v: Vec<f64> = (0..100).map(|_| s.uniform_in(-5.0, 5.0)).collect();
    let got = log_sum_exp(&v).unwrap();
    assert!((got - naive_log_sum_exp(&v)).abs() < 1e-12);
}

#[test]
fn centering_random_matrix() {
    let m = random_matrix(40, 8, 3);
    let (c, mean) = center_columns(&m).unwrap();
    for j in 0..8 {
        let col_mean: f64 = (0..40).map(|i| c[(i, j)]).sum::<f64>() / 40.0;
        assert!(col_mean.abs() <= 1e-10);
        for i in 0..40 {
            assert!((c[(i, j)] + mean[j] - m[(i, j)]).abs() < 1e-15);
        }
    }
}

#[test]
fn pca_matches_jacobi_on_small_fixture() {
    // 5×3 fixture, centered
    let raw = Matrix::from_rows(&[
        [2.0, 0.5, -1.0],
        [1.0, -0.3, 0.7],
        [-0.5, 1.2, 0.4],
        [0.3, -2.0, 1.5],
        [-1.1, 0.8, -0.9],
    ])
    .unwrap();
    let (m, _) = center_columns(&raw).unwrap();
    let basis = principal_components(&m, 3).unwrap();
    let (vals, vecs) = jacobi_eigen(&covariance(&m));
    for j in 0..3 {
        assert!(sign_aligned_diff(basis.component(j), &vecs[j]) < 1e-8, "component {j}");
        assert!((basis.variances()[j] - vals[j]).abs() < 1e-10);
    }
}

#[test]
fn explained_variance_bounded_by_trace() {
    let (m, _) = center_columns(&random_matrix(100, 10, 5)).unwrap();
    let b = principal_components(&m, 10).unwrap();
    let total: f64 = (0..10).map(|j| (0..100).map(|i| m[(i, j)] * m[(i, j)]).sum::<f64>() / 100.0).sum();
    let explained: f64 = b.variances().iter().sum();
    assert!(explained <= total * (1.0 + 1e-12));
    assert!((explained - total).abs() < 1e-10 * total);
    let top3: f64 = principal_components(&m, 3).unwrap().variances().iter().sum();
    assert!(top3 < total);
}

#[test]
fn cosine_matches_extended_precision() {
    let mut s = Sampler::new(8);
    for _ in 0..200 {
        let a = s.normal_vec(16, 3.0);
        let b = s.normal_vec(16, 3.0);
        assert!((cosine_similarity(&a, &b).unwrap() - cosine_oracle(&a, &b)).abs() < 1e-12);
    }
}

#[test]
fn spearman_tied_example() {
    let x = [1.0, 2.0, 2.0, 3.0];
    let y = [10.0, 20.0, 30.0, 40.0];
    let want = spearman_oracle(&x, &y);
    assert!((spearman(&x, &y).unwrap() - want).abs() < 1e-12);
    // hand value: ranks 1, 2.5, 2.5, 4 vs 1..4 => 4.5 / sqrt(4.5 * 5)
    assert!((want - 4.5 / (4.5f64 * 5.0).sqrt()).abs() < 1e-12);
}

#[test]
fn partition_log_matches_naive() {
    let m = random_matrix(20, 4, 9);
    let mut s = Sampler::new(10);
    for _ in 0..10 {
        let mut u = s.normal_vec(4, 1.0);
        let n = u.iter().map(|x| x * x).sum::<f64>().sqrt();
        u.iter_mut().for_each(|x| *x /= n);
        let naive = (0..20)
            .map(|i| m.row(i).iter().zip(&u).map(|(a, b)| a * b).sum::<f64>().exp())
            .sum::<f64>()
            .ln();
        assert!((partition_log(&m, &u).unwrap() - naive).abs() < 1e-10);
    }
}

#[test]
fn kmeans_assign_matches_linear_scan() {
    let w = random_matrix(60, 5, 11);
    let model = kmeans_fit(&w, 6, 0).unwrap();
    let probes = random_matrix(100, 5, 12);
    for p in probes.iter_rows() {
        assert_eq!(kmeans_assign(&model, p).unwrap(), brute_nearest(model.centroids(), p));
    }
}

#[test]
fn kmeans_invariants_hold() {
    let w = random_matrix(80, 4, 13);
    let model = kmeans_fit(&w, 5, 3).unwrap();
    let mut counts = vec![0; 5];
    let mut objective = 0.0;
    for (i, &a) in model.assignments().iter().enumerate() {
        counts[a as usize] += 1;
        assert_eq!(a as usize, brute_nearest(model.centroids(), w.row(i)));
        objective += model.centroids().row(a as usize).iter().zip(w.row(i)).map(|(c, x)| (c - x) * (c - x)).sum::<f64>();
    }
    assert!(counts.iter().all(|&c| c > 0));
    assert!((model.objective() - objective).abs() <= 1e-6 * objective);
}

#[test]
fn kmeans_recovers_separated_blobs() {
    let (w, labels) = isoforge_core::synth::two_blobs(30, 4, 10.0, 21);
    for seed in 0..5 {
        let model = kmeans_fit(&w, 2, seed).unwrap();
        let got: Vec<usize> = model.assignments().iter().map(|&a| a as usize).collect();
        assert!(labels_agree_up_to_permutation(&got, &labels), "seed {seed}");
    }
}

#[test]
fn kmeans_repairs_duplicated_points() {
    // 40 copies of one point plus a handful of distinct ones
    let mut rows = vec![[1.0, 1.0]; 40];
    rows.extend([[0.0, 0.0], [5.0, 5.0], [9.0, 0.0], [0.0, 9.0]]);
    let w = Matrix::from_rows(&rows).unwrap();
    for seed in 0..20 {
        let model = kmeans_fit(&w, 5, seed).unwrap();
        assert!(model.members().iter().all(|m| !m.is_empty()), "seed {seed}");
    }
}

#[test]
fn sentence_embedding_matches_column_mean() {
    let mut s = Sampler::new(77);
    let n = 50;
    let d = 6;
    let data: Vec<f32> = (0..(n + 3) * d).map(|_| s.normal() as f32).collect();
    let meta: Vec<TokenMeta> = (0..n + 3)
        .map(|i| TokenMeta::new("w", if i < n { 4 } else { 5 }, i as u32))
        .collect();
    let store = EmbeddingStore::new(n + 3, d, data.clone(), Some(meta)).unwrap();
    let got = sentence_embedding(&store, 4).unwrap();
    for j in 0..d {
        let want = (0..n).map(|i| f64::from(data[i * d + j])).sum::<f64>() / n as f64;
        assert!((got[j] - want).abs() < 1e-12);
    }
}
