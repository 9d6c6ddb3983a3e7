use alloc::format;
use alloc::vec::Vec;

use crate::matrix::squared_distance;
use crate::{EmbeddingStore, Error, Result};

/// Which rows may be neighbours of a target occurrence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Candidates {
    /// Other occurrences of the same surface token.
    #[default]
    SameToken,
    /// Every other row in the store.
    AllRows,
}

/// Percentage of the `k_neighbors` nearest neighbours of each occurrence of
/// `target_token` that share its structural group, averaged over
/// occurrences.
///
/// Neighbours are ranked by Euclidean distance, lower row index first on
/// ties. Candidate rows without a group never count as same-group.
pub fn knn_group_purity(
    store: &EmbeddingStore,
    target_token: &str,
    k_neighbors: usize,
    candidates: Candidates,
) -> Result<f64> {
    let meta = store.require_meta("knn_group_purity")?;
    let targets: Vec<usize> = (0..store.n_rows()).filter(|&i| meta[i].token == target_token).collect();
    if targets.len() < 2 {
        return Err(Error::Cardinality(format!(
            "token {target_token:?} occurs {} times, need at least 2",
            targets.len()
        )));
    }
    if targets.iter().any(|&i| meta[i].group_id.is_none()) {
        return Err(Error::MetadataRequired("group_id on every target occurrence"));
    }
    let pool: Vec<usize> = match candidates {
        Candidates::SameToken => targets.clone(),
        Candidates::AllRows => (0..store.n_rows()).collect(),
    };
    if k_neighbors == 0 || k_neighbors >= pool.len() {
        return Err(Error::Cardinality(format!(
            "k={k_neighbors} must be in 1..{} for {} candidates",
            pool.len(),
            pool.len()
        )));
    }
    let rows: Vec<Vec<f64>> = (0..store.n_rows())
        .map(|i| store.row(i).iter().map(|&v| f64::from(v)).collect())
        .collect();
    let mut total = 0.0;
    let mut ranked: Vec<(f64, usize)> = Vec::with_capacity(pool.len());
    for &t in &targets {
        ranked.clear();
        ranked.extend(pool.iter().filter(|&&j| j != t).map(|&j| (squared_distance(&rows[t], &rows[j]), j)));
        ranked.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let group = meta[t].group_id;
        let same = ranked[..k_neighbors].iter().filter(|(_, j)| meta[*j].group_id == group).count();
        total += same as f64 / k_neighbors as f64;
    }
    Ok(100.0 * total / targets.len() as f64)
}
