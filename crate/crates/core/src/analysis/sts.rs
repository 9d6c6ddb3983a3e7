use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use crate::kernels::{cosine_similarity, spearman};
use crate::{EmbeddingStore, Error, Result};

/// One scored sentence pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StsPair {
    pub sentence_a: u64,
    pub sentence_b: u64,
    /// Gold similarity in `[0, 5]`.
    pub gold: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StsDataset {
    pairs: Vec<StsPair>,
}

impl StsDataset {
    pub fn new(pairs: Vec<StsPair>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::EmptyInput);
        }
        if let Some(p) = pairs.iter().find(|p| !(0.0..=5.0).contains(&p.gold)) {
            return Err(Error::InvalidArgument(format!("gold score {} outside [0, 5]", p.gold)));
        }
        Ok(Self { pairs })
    }

    pub fn pairs(&self) -> &[StsPair] {
        &self.pairs
    }
}

/// Mean of every row belonging to `sentence_id`.
pub fn sentence_embedding(store: &EmbeddingStore, sentence_id: u64) -> Result<Vec<f64>> {
    let meta = store.require_meta("sentence_embedding")?;
    let mut acc = alloc::vec![0.0; store.dim()];
    let mut count = 0usize;
    for (i, m) in meta.iter().enumerate() {
        if m.sentence_id == sentence_id {
            count += 1;
            for (a, &v) in acc.iter_mut().zip(store.row(i)) {
                *a += f64::from(v);
            }
        }
    }
    if count == 0 {
        return Err(Error::NotFound(sentence_id));
    }
    for a in acc.iter_mut() {
        *a /= count as f64;
    }
    Ok(acc)
}

/// Mean embedding of every sentence in one pass. Same summation order as
/// [`sentence_embedding`].
pub fn sentence_embeddings(store: &EmbeddingStore) -> Result<BTreeMap<u64, Vec<f64>>> {
    let meta = store.require_meta("sentence_embeddings")?;
    let mut sums: BTreeMap<u64, (Vec<f64>, usize)> = BTreeMap::new();
    for (i, m) in meta.iter().enumerate() {
        let (acc, count) = sums
            .entry(m.sentence_id)
            .or_insert_with(|| (alloc::vec![0.0; store.dim()], 0));
        *count += 1;
        for (a, &v) in acc.iter_mut().zip(store.row(i)) {
            *a += f64::from(v);
        }
    }
    Ok(sums
        .into_iter()
        .map(|(id, (mut acc, count))| {
            for a in acc.iter_mut() {
                *a /= count as f64;
            }
            (id, acc)
        })
        .collect())
}

/// Spearman correlation (×100) between pairwise cosine similarities of mean
/// sentence embeddings and gold scores.
pub fn eval_sts(store: &EmbeddingStore, dataset: &StsDataset) -> Result<f64> {
    let sentences = sentence_embeddings(store)?;
    let lookup = |id: u64| sentences.get(&id).ok_or(Error::NotFound(id));
    let mut predicted = Vec::with_capacity(dataset.pairs.len());
    let mut gold = Vec::with_capacity(dataset.pairs.len());
    for p in &dataset.pairs {
        predicted.push(cosine_similarity(lookup(p.sentence_a)?, lookup(p.sentence_b)?)?);
        gold.push(p.gold);
    }
    Ok(100.0 * spearman(&predicted, &gold)?)
}
