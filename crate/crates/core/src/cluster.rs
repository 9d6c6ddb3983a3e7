//! Seeded k-means (k-means++ initialization, Lloyd iterations) and local
//! isotropy.
//!
//! Randomness comes only from `ChaCha8Rng::seed_from_u64(seed)`, so a fit is
//! reproducible across platforms for a fixed `(data, k, seed)`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::isotropy::{isotropy_score, IsotropyReport, SignMode};
use crate::kernels::column_means;
use crate::matrix::{pairwise_sum, squared_distance, Matrix};
use crate::{Error, Result};

pub const MAX_ITERATIONS: usize = 300;
/// Lloyd stops once `(prev − obj) ≤ RELATIVE_TOLERANCE · prev`.
pub const RELATIVE_TOLERANCE: f64 = 1e-4;

/// A fitted k-means partition.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterModel {
    centroids: Matrix,
    assignments: Vec<u32>,
    objective: f64,
    seed: u64,
    iterations_run: u32,
}

impl ClusterModel {
    /// Rebuilds a model from stored parts, checking index ranges and that no
    /// cluster is empty.
    pub fn from_parts(
        centroids: Matrix,
        assignments: Vec<u32>,
        objective: f64,
        seed: u64,
        iterations_run: u32,
    ) -> Result<Self> {
        let k = centroids.rows();
        if k == 0 {
            return Err(Error::Cardinality("a cluster model needs at least one centroid".into()));
        }
        let mut counts = vec![0usize; k];
        for &a in &assignments {
            let slot = counts
                .get_mut(a as usize)
                .ok_or_else(|| Error::InvalidArgument(format!("assignment {a} out of range for k={k}")))?;
            *slot += 1;
        }
        if !assignments.is_empty() {
            if let Some(c) = counts.iter().position(|&n| n == 0) {
                return Err(Error::InvalidArgument(format!("cluster {c} is empty")));
            }
        }
        if !objective.is_finite() || objective < 0.0 {
            return Err(Error::InvalidArgument("objective must be finite and non-negative".into()));
        }
        Ok(Self { centroids, assignments, objective, seed, iterations_run })
    }

    /// The single-cluster model of `w`: centroid is the column mean.
    pub fn single(w: &Matrix) -> Result<Self> {
        let mean = column_means(w)?;
        let centroids = Matrix::from_vec(1, w.cols(), mean)?;
        let assignments = vec![0; w.rows()];
        let objective = objective(w, &centroids, &assignments);
        Ok(Self { centroids, assignments, objective, seed: 0, iterations_run: 0 })
    }

    pub fn k(&self) -> usize {
        self.centroids.rows()
    }

    pub fn dim(&self) -> usize {
        self.centroids.cols()
    }

    pub fn centroids(&self) -> &Matrix {
        &self.centroids
    }

    pub fn assignments(&self) -> &[u32] {
        &self.assignments
    }

    /// Within-cluster sum of squared distances at the final centroids.
    pub fn objective(&self) -> f64 {
        self.objective
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn iterations_run(&self) -> u32 {
        self.iterations_run
    }

    /// Row indices per cluster, each in ascending order.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.k()];
        for (i, &a) in self.assignments.iter().enumerate() {
            out[a as usize].push(i);
        }
        out
    }
}

/// Index of the centroid nearest to `x`; the lowest index wins exact ties.
pub fn kmeans_assign(model: &ClusterModel, x: &[f64]) -> Result<usize> {
    if x.len() != model.dim() {
        return Err(Error::Dim { expected: model.dim(), found: x.len() });
    }
    Ok(nearest(&model.centroids, x).0)
}

fn nearest(centroids: &Matrix, x: &[f64]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (c, row) in centroids.iter_rows().enumerate() {
        let d = squared_distance(x, row);
        if d < best.1 {
            best = (c, d);
        }
    }
    best
}

fn objective(w: &Matrix, centroids: &Matrix, assignments: &[u32]) -> f64 {
    let d: Vec<f64> = w
        .iter_rows()
        .zip(assignments)
        .map(|(r, &a)| squared_distance(r, centroids.row(a as usize)))
        .collect();
    pairwise_sum(&d)
}

fn count_distinct_rows(w: &Matrix) -> usize {
    let mut idx: Vec<usize> = (0..w.rows()).collect();
    let cmp_rows = |a: &usize, b: &usize| {
        w.row(*a)
            .iter()
            .zip(w.row(*b))
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(core::cmp::Ordering::Equal)
    };
    idx.sort_by(cmp_rows);
    1 + idx.windows(2).filter(|p| w.row(p[0]) != w.row(p[1])).count()
}

/// Uniform draw in `[0, 1)` with 53 random bits.
fn uniform01(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform index in `0..n` (multiply-shift).
fn uniform_index(rng: &mut ChaCha8Rng, n: usize) -> usize {
    ((u128::from(rng.next_u64()) * n as u128) >> 64) as usize
}

fn kmeans_pp_init(w: &Matrix, k: usize, rng: &mut ChaCha8Rng) -> Result<Matrix> {
    let n = w.rows();
    let mut chosen = Vec::with_capacity(k);
    chosen.push(uniform_index(rng, n));
    let mut d2: Vec<f64> = w.iter_rows().map(|r| squared_distance(r, w.row(chosen[0]))).collect();
    while chosen.len() < k {
        let total = pairwise_sum(&d2);
        if !(total > 0.0) {
            return Err(Error::Numerics("k-means++ ran out of distinct candidates"));
        }
        let target = uniform01(rng) * total;
        let mut acc = 0.0;
        let mut pick = None;
        for (i, &d) in d2.iter().enumerate() {
            if d > 0.0 {
                acc += d;
                pick = Some(i);
                if acc > target {
                    break;
                }
            }
        }
        let pick = pick.expect("total > 0 implies a positive weight");
        chosen.push(pick);
        for (di, r) in d2.iter_mut().zip(w.iter_rows()) {
            *di = di.min(squared_distance(r, w.row(pick)));
        }
    }
    Ok(w.select_rows(&chosen))
}

/// Assigns every row to its nearest centroid, then re-seeds empty clusters at
/// the row farthest from its centroid until none is empty.
fn assign_and_repair(w: &Matrix, centroids: &mut Matrix, assignments: &mut [u32]) -> Result<()> {
    let k = centroids.rows();
    let mut dist = vec![0.0; w.rows()];
    for _ in 0..=w.rows() + k {
        let mut counts = vec![0usize; k];
        for (i, r) in w.iter_rows().enumerate() {
            let (c, d) = nearest(centroids, r);
            assignments[i] = c as u32;
            dist[i] = d;
            counts[c] += 1;
        }
        let Some(empty) = counts.iter().position(|&n| n == 0) else {
            return Ok(());
        };
        let mut far = 0;
        for i in 1..dist.len() {
            if dist[i] > dist[far] {
                far = i;
            }
        }
        if !(dist[far] > 0.0) {
            return Err(Error::Numerics("cannot repair an empty cluster: all rows sit on centroids"));
        }
        log::debug!("re-seeding empty cluster {empty} at row {far}");
        centroids.row_mut(empty).copy_from_slice(w.row(far));
    }
    Err(Error::Numerics("empty-cluster repair did not terminate"))
}

fn update_centroids(w: &Matrix, centroids: &mut Matrix, assignments: &[u32]) {
    let (k, d) = (centroids.rows(), centroids.cols());
    let mut sums = Matrix::zeros(k, d);
    let mut counts = vec![0usize; k];
    for (r, &a) in w.iter_rows().zip(assignments) {
        counts[a as usize] += 1;
        for (s, x) in sums.row_mut(a as usize).iter_mut().zip(r) {
            *s += x;
        }
    }
    for c in 0..k {
        if counts[c] == 0 {
            continue;
        }
        let inv = counts[c] as f64;
        for (dst, s) in centroids.row_mut(c).iter_mut().zip(sums.row(c)) {
            *dst = s / inv;
        }
    }
}

/// Fits k-means with k-means++ seeding.
///
/// Lloyd iterations stop when the relative objective improvement drops below
/// [`RELATIVE_TOLERANCE`] or after [`MAX_ITERATIONS`]. The returned
/// assignments are nearest-centroid for the returned centroids, and no
/// cluster is empty. Requires at least `k` distinct rows.
pub fn kmeans_fit(w: &Matrix, k: usize, seed: u64) -> Result<ClusterModel> {
    let n = w.rows();
    if k == 0 || k > n {
        return Err(Error::Cardinality(format!("k={k} must be in 1..={n}")));
    }
    if k > 1 {
        let distinct = count_distinct_rows(w);
        if distinct < k {
            return Err(Error::Cardinality(format!("k={k} exceeds the {distinct} distinct rows")));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centroids = kmeans_pp_init(w, k, &mut rng)?;
    let mut assignments = vec![0u32; n];
    let mut prev = f64::INFINITY;
    let mut iterations = 0u32;
    loop {
        assign_and_repair(w, &mut centroids, &mut assignments)?;
        iterations += 1;
        let obj = objective(w, &centroids, &assignments);
        debug_assert!(
            obj <= prev * (1.0 + 1e-12) + 1e-12,
            "objective increased: {prev} -> {obj}"
        );
        let converged = prev.is_finite() && (prev == 0.0 || prev - obj <= RELATIVE_TOLERANCE * prev);
        prev = obj;
        if converged || obj == 0.0 || iterations as usize >= MAX_ITERATIONS {
            break;
        }
        update_centroids(w, &mut centroids, &assignments);
    }
    Ok(ClusterModel { centroids, assignments, objective: prev, seed, iterations_run: iterations })
}

/// Subtracts each cluster's own mean from its rows. Returns the re-stacked
/// matrix (original row order) and the `k × d` matrix of cluster means.
pub fn center_within_clusters(w: &Matrix, model: &ClusterModel) -> Result<(Matrix, Matrix)> {
    if model.assignments().len() != w.rows() {
        return Err(Error::Dim { expected: w.rows(), found: model.assignments().len() });
    }
    let mut out = w.clone();
    let mut means = Matrix::zeros(model.k(), w.cols());
    for (c, rows) in model.members().iter().enumerate() {
        let mean = column_means(&w.select_rows(rows))?;
        for &i in rows {
            for (v, mu) in out.row_mut(i).iter_mut().zip(&mean) {
                *v -= mu;
            }
        }
        means.row_mut(c).copy_from_slice(&mean);
    }
    Ok((out, means))
}

/// Isotropy after clustering with k-means and making each cluster zero-mean.
pub fn local_isotropy(w: &Matrix, k: usize, seed: u64, sign_mode: SignMode) -> Result<IsotropyReport> {
    let model = kmeans_fit(w, k, seed)?;
    let (centered, _) = center_within_clusters(w, &model)?;
    isotropy_score(&centered, sign_mode)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::center_columns;

    fn grid() -> Matrix {
        Matrix::from_rows(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [5.0, 5.0], [6.0, 5.0], [5.0, 6.0]]).unwrap()
    }

    #[test]
    fn k1_is_mean() {
        let w = grid();
        let m = kmeans_fit(&w, 1, 7).unwrap();
        let (centered, mean) = center_columns(&w).unwrap();
        assert_eq!(m.centroids().row(0), &mean[..]);
        let total: f64 = centered.as_slice().iter().map(|v| v * v).sum();
        assert!((m.objective() - total).abs() < 1e-12 * total);
    }

    #[test]
    fn k_equals_n() {
        let w = grid();
        let m = kmeans_fit(&w, 6, 3).unwrap();
        assert_eq!(m.objective(), 0.0);
        for (i, &a) in m.assignments().iter().enumerate() {
            assert_eq!(m.centroids().row(a as usize), w.row(i));
        }
    }

    #[test]
    fn cardinality_errors() {
        let w = grid();
        assert!(matches!(kmeans_fit(&w, 7, 0), Err(Error::Cardinality(_))));
        assert!(matches!(kmeans_fit(&w, 0, 0), Err(Error::Cardinality(_))));
        let dup = Matrix::from_rows(&[[1.0], [1.0], [1.0], [2.0]]).unwrap();
        assert!(matches!(kmeans_fit(&dup, 3, 0), Err(Error::Cardinality(_))));
        let m = kmeans_fit(&dup, 2, 0).unwrap();
        assert_eq!(m.members().iter().filter(|c| !c.is_empty()).count(), 2);
    }

    #[test]
    fn assign_tie_rule() {
        let c = Matrix::from_rows(&[[-1.0, 0.0], [5.0, 5.0], [1.0, 0.0], [0.0, 9.0]]).unwrap();
        let m = ClusterModel::from_parts(c, vec![], 0.0, 0, 0).unwrap();
        assert_eq!(kmeans_assign(&m, &[0.0, 0.0]).unwrap(), 0);
        assert_eq!(kmeans_assign(&m, &[0.0, 9.0]).unwrap(), 3);
        assert!(kmeans_assign(&m, &[0.0]).is_err());
    }

    #[test]
    fn deterministic() {
        let w = grid();
        assert_eq!(kmeans_fit(&w, 2, 11).unwrap(), kmeans_fit(&w, 2, 11).unwrap());
    }

    #[test]
    fn local_k1_matches_global_centering() {
        let w = grid();
        let local = local_isotropy(&w, 1, 0, SignMode::BothSigns).unwrap();
        let (c, _) = center_columns(&w).unwrap();
        assert_eq!(local, isotropy_score(&c, SignMode::BothSigns).unwrap());
    }

    #[test]
    fn from_parts_validates() {
        let c = Matrix::zeros(2, 1);
        assert!(ClusterModel::from_parts(c.clone(), vec![0, 0], 0.0, 0, 1).is_err());
        assert!(ClusterModel::from_parts(c.clone(), vec![0, 2], 0.0, 0, 1).is_err());
        assert!(ClusterModel::from_parts(c, vec![0, 1], 0.0, 0, 1).is_ok());
    }
}
