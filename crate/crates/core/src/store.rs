//! The in-memory embedding store: an `N × D` matrix of token-occurrence
//! embeddings plus optional per-row token metadata.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::{Error, Matrix, Result};

/// Coarse verb tense.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Tense {
    Past,
    Present,
    Other,
}

impl core::str::FromStr for Tense {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "past" => Ok(Tense::Past),
            "present" => Ok(Tense::Present),
            "other" => Ok(Tense::Other),
            _ => Err(Error::InvalidArgument(format!("unknown tense {s:?}"))),
        }
    }
}

/// Annotations for one token occurrence.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct TokenMeta {
    pub token: String,
    pub sentence_id: u64,
    pub position: u32,
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub lemma: Option<String>,
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub tense: Option<Tense>,
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub sense_id: Option<String>,
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub group_id: Option<i64>,
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub frequency: Option<u64>,
}

impl TokenMeta {
    pub fn new(token: impl Into<String>, sentence_id: u64, position: u32) -> Self {
        Self { token: token.into(), sentence_id, position, ..Default::default() }
    }
}

/// Token-occurrence embeddings, stored as 32-bit reals in row-major order.
///
/// Immutable once built; every constructor validates the invariants.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingStore {
    n_rows: usize,
    dim: usize,
    data: Vec<f32>,
    meta: Option<Vec<TokenMeta>>,
}

impl EmbeddingStore {
    pub fn new(n_rows: usize, dim: usize, data: Vec<f32>, meta: Option<Vec<TokenMeta>>) -> Result<Self> {
        if n_rows == 0 || dim == 0 {
            return Err(Error::InvalidStore(format!("shape {n_rows}x{dim} must be at least 1x1")));
        }
        if data.len() != n_rows * dim {
            return Err(Error::InvalidStore(format!(
                "{} values for a {n_rows}x{dim} matrix",
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidStore(format!(
                "non-finite value at row {}, column {}",
                pos / dim,
                pos % dim
            )));
        }
        if let Some(meta) = &meta {
            validate_meta(meta, n_rows)?;
        }
        Ok(Self { n_rows, dim, data, meta })
    }

    /// Rounds a 64-bit matrix to 32-bit storage.
    pub fn from_matrix(m: &Matrix, meta: Option<Vec<TokenMeta>>) -> Result<Self> {
        Self::new(m.rows(), m.cols(), m.to_f32(), meta)
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn data(&self) -> &[f32] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f32] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn meta(&self) -> Option<&[TokenMeta]> {
        self.meta.as_deref()
    }

    /// Metadata, or `MetadataRequired` naming the caller's purpose.
    pub fn require_meta(&self, purpose: &'static str) -> Result<&[TokenMeta]> {
        self.meta().ok_or(Error::MetadataRequired(purpose))
    }

    /// The embeddings widened to 64-bit.
    pub fn to_matrix(&self) -> Matrix {
        Matrix::from_f32(self.n_rows, self.dim, &self.data).expect("store shape is valid")
    }

    /// A store with the same metadata and new values (same row count).
    pub fn with_values(&self, m: &Matrix) -> Result<Self> {
        if m.rows() != self.n_rows {
            return Err(Error::Dim { expected: self.n_rows, found: m.rows() });
        }
        Self::from_matrix(m, self.meta.clone())
    }

    /// Rows whose metadata satisfies `predicate`, in original order.
    pub fn filter_rows(&self, predicate: impl Fn(&TokenMeta) -> bool) -> Result<Self> {
        let meta = self.require_meta("filter_rows")?;
        let keep: Vec<usize> = (0..self.n_rows).filter(|&i| predicate(&meta[i])).collect();
        self.select(&keep)
    }

    /// Rows at `indices`, in that order.
    pub fn select(&self, indices: &[usize]) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::EmptySelection);
        }
        let mut data = Vec::with_capacity(indices.len() * self.dim);
        for &i in indices {
            data.extend_from_slice(self.row(i));
        }
        let meta = self.meta.as_ref().map(|m| indices.iter().map(|&i| m[i].clone()).collect());
        Self::new(indices.len(), self.dim, data, meta)
    }

    /// Fingerprint of the widened matrix; metadata is not included.
    pub fn fingerprint(&self) -> u64 {
        self.to_matrix().fingerprint()
    }
}

fn validate_meta(meta: &[TokenMeta], n_rows: usize) -> Result<()> {
    if meta.len() != n_rows {
        return Err(Error::InvalidStore(format!("{} metadata records for {n_rows} rows", meta.len())));
    }
    let mut seen = BTreeSet::new();
    for (i, m) in meta.iter().enumerate() {
        if !seen.insert((m.sentence_id, m.position)) {
            return Err(Error::InvalidStore(format!(
                "row {i}: duplicate (sentence_id, position) = ({}, {})",
                m.sentence_id, m.position
            )));
        }
        if m.tense.is_some() != m.sense_id.is_some() {
            return Err(Error::InvalidStore(format!("row {i}: tense and sense_id must be given together")));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn tokens(toks: &[&str]) -> EmbeddingStore {
        let meta = toks.iter().enumerate().map(|(i, t)| TokenMeta::new(*t, 0, i as u32)).collect();
        let data = (0..toks.len()).map(|i| i as f32).collect();
        EmbeddingStore::new(toks.len(), 1, data, Some(meta)).unwrap()
    }

    #[test]
    fn invariants_enforced() {
        assert!(EmbeddingStore::new(0, 1, vec![], None).is_err());
        assert!(EmbeddingStore::new(2, 3, vec![0.0; 5], None).is_err());
        let err = EmbeddingStore::new(2, 2, vec![0.0, 1.0, f32::NAN, 0.0], None).unwrap_err();
        assert!(matches!(err, Error::InvalidStore(ref s) if s.contains("row 1, column 0")));
        let dup = vec![TokenMeta::new("a", 0, 0), TokenMeta::new("b", 0, 0)];
        assert!(EmbeddingStore::new(2, 1, vec![0.0; 2], Some(dup)).is_err());
        let mut half = TokenMeta::new("ran", 0, 0);
        half.tense = Some(Tense::Past);
        assert!(EmbeddingStore::new(1, 1, vec![0.0], Some(vec![half])).is_err());
    }

    #[test]
    fn filter_cases() {
        let s = tokens(&["a", ".", "b", ".", "c", "d", ".", "e", "f", "g"]);
        assert_eq!(s.filter_rows(|_| true).unwrap(), s);
        let periods = s.filter_rows(|m| m.token == ".").unwrap();
        assert_eq!(periods.n_rows(), 3);
        assert_eq!(periods.data(), &[1.0, 3.0, 6.0]);
        assert_eq!(s.filter_rows(|m| m.token == "zzz"), Err(Error::EmptySelection));
        let bare = EmbeddingStore::new(1, 1, vec![0.0], None).unwrap();
        assert!(matches!(bare.filter_rows(|_| true), Err(Error::MetadataRequired(_))));
    }

    #[test]
    fn fingerprint_tracks_values() {
        let a = tokens(&["a", "b"]);
        let b = a.with_values(&Matrix::from_rows(&[[0.0], [2.0]]).unwrap()).unwrap();
        assert_ne!(a.fingerprint(), b.fingerprint());
        assert_eq!(a.fingerprint(), a.clone().fingerprint());
    }

    #[test]
    fn tense_parse() {
        assert_eq!("Past".parse::<Tense>().unwrap(), Tense::Past);
        assert!("future".parse::<Tense>().is_err());
    }
}
