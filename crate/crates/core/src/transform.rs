//! Dominant-direction removal.
//!
//! The cluster-based transform partitions the space with k-means, makes every
//! cluster zero-mean and projects each cluster off its own top principal
//! components. The global transform is the single-cluster special case, with
//! the principal components of the whole centered space.
//!
//! Applying a transform to a row: pick the nearest centroid `c`, subtract the
//! mean of cluster `c`, remove the components of cluster `c`. The mean is not
//! added back.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use crate::cluster::{center_within_clusters, kmeans_assign, kmeans_fit, ClusterModel};
use crate::kernels::center_columns;
use crate::matrix::Matrix;
use crate::pca::{principal_components, remove_from_row, PrincipalBasis};
use crate::{EmbeddingStore, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransformKind {
    Global,
    ClusterBased,
}

impl TransformKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TransformKind::Global => "global",
            TransformKind::ClusterBased => "cluster",
        }
    }
}

/// Number of components to remove per cluster: a uniform default with
/// optional per-cluster overrides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PcBudget {
    pub default: usize,
    pub overrides: BTreeMap<usize, usize>,
}

impl PcBudget {
    pub fn uniform(m: usize) -> Self {
        Self { default: m, overrides: BTreeMap::new() }
    }

    pub fn for_cluster(&self, c: usize) -> usize {
        self.overrides.get(&c).copied().unwrap_or(self.default)
    }
}

/// A fitted, persistable enhancement transform.
#[derive(Debug, Clone, PartialEq)]
pub struct FittedTransform {
    kind: TransformKind,
    cluster_model: ClusterModel,
    per_cluster_mean: Matrix,
    per_cluster_basis: Vec<PrincipalBasis>,
    m_requested: usize,
    fit_fingerprint: u64,
}

impl FittedTransform {
    /// Reassembles a transform from stored parts and checks consistency.
    pub fn from_parts(
        kind: TransformKind,
        cluster_model: ClusterModel,
        per_cluster_mean: Matrix,
        per_cluster_basis: Vec<PrincipalBasis>,
        m_requested: usize,
        fit_fingerprint: u64,
    ) -> Result<Self> {
        let (k, d) = (cluster_model.k(), cluster_model.dim());
        if kind == TransformKind::Global && k != 1 {
            return Err(Error::InvalidArgument(format!("global transform with k={k}")));
        }
        if per_cluster_mean.rows() != k || per_cluster_mean.cols() != d {
            return Err(Error::Dim { expected: k * d, found: per_cluster_mean.rows() * per_cluster_mean.cols() });
        }
        if per_cluster_basis.len() != k {
            return Err(Error::Dim { expected: k, found: per_cluster_basis.len() });
        }
        for b in &per_cluster_basis {
            if b.dim() != d {
                return Err(Error::Dim { expected: d, found: b.dim() });
            }
        }
        Ok(Self { kind, cluster_model, per_cluster_mean, per_cluster_basis, m_requested, fit_fingerprint })
    }

    pub fn kind(&self) -> TransformKind {
        self.kind
    }

    pub fn cluster_model(&self) -> &ClusterModel {
        &self.cluster_model
    }

    pub fn k(&self) -> usize {
        self.cluster_model.k()
    }

    pub fn dim(&self) -> usize {
        self.cluster_model.dim()
    }

    pub fn per_cluster_mean(&self) -> &Matrix {
        &self.per_cluster_mean
    }

    pub fn per_cluster_basis(&self) -> &[PrincipalBasis] {
        &self.per_cluster_basis
    }

    pub fn m_requested(&self) -> usize {
        self.m_requested
    }

    pub fn fit_fingerprint(&self) -> u64 {
        self.fit_fingerprint
    }

    /// Whether `w` is the matrix this transform was fitted on.
    pub fn fitted_on(&self, w: &Matrix) -> bool {
        w.fingerprint() == self.fit_fingerprint
    }

    /// Cluster index used for each row of `w`.
    pub fn assign_rows(&self, w: &Matrix) -> Result<Vec<usize>> {
        w.iter_rows().map(|r| kmeans_assign(&self.cluster_model, r)).collect()
    }

    /// Centers and projects every row of `w`.
    pub fn apply(&self, w: &Matrix) -> Result<Matrix> {
        if w.cols() != self.dim() {
            return Err(Error::Dim { expected: self.dim(), found: w.cols() });
        }
        let mut out = w.clone();
        for i in 0..out.rows() {
            let c = kmeans_assign(&self.cluster_model, w.row(i))?;
            let row = out.row_mut(i);
            for (v, mu) in row.iter_mut().zip(self.per_cluster_mean.row(c)) {
                *v -= mu;
            }
            remove_from_row(row, &self.per_cluster_basis[c]);
        }
        Ok(out)
    }

    /// [`apply`](Self::apply) on a store; metadata passes through unchanged.
    pub fn apply_store(&self, store: &EmbeddingStore) -> Result<EmbeddingStore> {
        store.with_values(&self.apply(&store.to_matrix())?)
    }
}

fn check_budget(m: usize, d: usize) -> Result<()> {
    if m == 0 || m > d {
        return Err(Error::Rank { requested: m, max: d });
    }
    Ok(())
}

/// Top-`m` components of an already centered block, clamped to the block's
/// row count.
fn block_basis(centered: &Matrix, m: usize) -> Result<PrincipalBasis> {
    let usable = m.min(centered.rows());
    if usable < m {
        log::warn!("cluster of {} rows cannot supply {m} components", centered.rows());
    }
    let mut basis = principal_components(centered, usable)?;
    if usable < m {
        // keep the original request so the shortfall stays visible
        basis = PrincipalBasis::from_parts(basis.components().clone(), basis.variances().to_vec(), m)?;
    }
    Ok(basis)
}

/// Global baseline: center the whole space and remove its top-`m` principal
/// components.
pub fn fit_global(w: &Matrix, m: usize) -> Result<FittedTransform> {
    check_budget(m, w.cols())?;
    let model = ClusterModel::single(w)?;
    let (centered, mean) = center_columns(w)?;
    let basis = block_basis(&centered, m)?;
    FittedTransform::from_parts(
        TransformKind::Global,
        model,
        Matrix::from_vec(1, w.cols(), mean)?,
        alloc::vec![basis],
        m,
        w.fingerprint(),
    )
}

/// Cluster-based transform with a uniform budget of `m` components.
pub fn fit_cluster_based(w: &Matrix, k: usize, m: usize, seed: u64) -> Result<FittedTransform> {
    fit_cluster_based_with(w, k, &PcBudget::uniform(m), seed)
}

/// Cluster-based transform with a per-cluster component budget.
pub fn fit_cluster_based_with(w: &Matrix, k: usize, budget: &PcBudget, seed: u64) -> Result<FittedTransform> {
    check_budget(budget.default, w.cols())?;
    for &m in budget.overrides.values() {
        check_budget(m, w.cols())?;
    }
    let model = kmeans_fit(w, k, seed)?;
    let (centered, means) = center_within_clusters(w, &model)?;
    let mut bases = Vec::with_capacity(k);
    for (c, rows) in model.members().iter().enumerate() {
        let block = centered.select_rows(rows);
        bases.push(block_basis(&block, budget.for_cluster(c))?);
    }
    FittedTransform::from_parts(
        TransformKind::ClusterBased,
        model,
        means,
        bases,
        budget.default,
        w.fingerprint(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::dot;

    fn sample() -> Matrix {
        Matrix::from_rows(&[
            [1.0, 2.0, 0.5],
            [2.0, 1.5, -0.5],
            [0.0, 3.0, 1.0],
            [4.0, -1.0, 2.0],
            [1.5, 0.5, 0.0],
        ])
        .unwrap()
    }

    #[test]
    fn full_budget_annihilates() {
        let w = sample();
        let t = fit_global(&w, 3).unwrap();
        assert!(t.apply(&w).unwrap().frobenius_norm() < 1e-8);
    }

    #[test]
    fn k1_matches_global() {
        let w = sample();
        let g = fit_global(&w, 2).unwrap();
        let c = fit_cluster_based(&w, 1, 2, 9).unwrap();
        assert_eq!(g.per_cluster_mean(), c.per_cluster_mean());
        assert_eq!(g.per_cluster_basis(), c.per_cluster_basis());
        assert_eq!(g.apply(&w).unwrap(), c.apply(&w).unwrap());
    }

    #[test]
    fn outputs_orthogonal_to_removed() {
        let w = sample();
        let t = fit_cluster_based(&w, 2, 1, 0).unwrap();
        let out = t.apply(&w).unwrap();
        for (i, c) in t.assign_rows(&w).unwrap().into_iter().enumerate() {
            for comp in t.per_cluster_basis()[c].components().iter_rows() {
                assert!(dot(out.row(i), comp).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn budget_errors() {
        let w = sample();
        assert!(matches!(fit_global(&w, 0), Err(Error::Rank { .. })));
        assert!(matches!(fit_global(&w, 4), Err(Error::Rank { .. })));
        assert!(matches!(fit_cluster_based(&w, 6, 1, 0), Err(Error::Cardinality(_))));
        assert!(matches!(fit_global(&w, 1).unwrap().apply(&Matrix::zeros(1, 2)), Err(Error::Dim { .. })));
    }

    #[test]
    fn per_cluster_override() {
        let w = sample();
        let mut budget = PcBudget::uniform(1);
        budget.overrides.insert(0, 2);
        let t = fit_cluster_based_with(&w, 2, &budget, 0).unwrap();
        assert!(t.per_cluster_basis()[0].requested() == 2);
        assert!(t.per_cluster_basis()[1].requested() == 1);
        assert_eq!(t.m_requested(), 1);
    }

    #[test]
    fn fingerprint_recorded() {
        let w = sample();
        let t = fit_global(&w, 1).unwrap();
        assert!(t.fitted_on(&w));
        assert!(!t.fitted_on(&Matrix::zeros(5, 3)));
    }
}
