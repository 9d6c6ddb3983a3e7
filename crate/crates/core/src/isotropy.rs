//! Partition-function isotropy.
//!
//! `F(u) = Σᵢ exp(⟨u, wᵢ⟩)` is evaluated in the log domain at every
//! eigenvector `u` of `WᵀW`, and the score is `min F / max F`. A score near 1
//! means no direction is preferred.

use alloc::format;
use alloc::vec::Vec;

use crate::kernels::log_sum_exp;
use crate::matrix::{dot, norm, Matrix};
use crate::pca::gram_eigenbasis;
use crate::{EmbeddingStore, Error, Result};

/// Which unit directions are evaluated for each eigenvector `u`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SignMode {
    /// Both `u` and `−u` (2·D directions). Independent of eigen-solver signs.
    #[default]
    BothSigns,
    /// Only `u`, with the largest coordinate made positive (D directions).
    ConventionSigns,
}

impl SignMode {
    pub fn as_str(self) -> &'static str {
        match self {
            SignMode::BothSigns => "both_signs",
            SignMode::ConventionSigns => "convention_signs",
        }
    }
}

impl core::str::FromStr for SignMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "both_signs" | "both" => Ok(SignMode::BothSigns),
            "convention_signs" | "convention" => Ok(SignMode::ConventionSigns),
            _ => Err(Error::InvalidArgument(format!("unknown sign mode {s:?}"))),
        }
    }
}

/// Extremes of `log F(u)` over the evaluated directions and their ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsotropyReport {
    /// `exp(log_f_min − log_f_max)`. Underflows to 0 below ~1e-308; the log
    /// fields stay exact.
    pub score: f64,
    pub log_f_min: f64,
    pub log_f_max: f64,
    pub n_directions: usize,
    pub sign_mode: SignMode,
}

impl IsotropyReport {
    fn from_logs(logs: &[f64], sign_mode: SignMode) -> Self {
        let log_f_min = logs.iter().copied().fold(f64::INFINITY, f64::min);
        let log_f_max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Self {
            score: libm::exp(log_f_min - log_f_max),
            log_f_min,
            log_f_max,
            n_directions: logs.len(),
            sign_mode,
        }
    }

    /// Natural log of the score, valid even when `score` underflows.
    pub fn log_score(&self) -> f64 {
        self.log_f_min - self.log_f_max
    }
}

/// `log F(u)` for a unit direction `u`.
pub fn partition_log(w: &Matrix, u: &[f64]) -> Result<f64> {
    if u.len() != w.cols() {
        return Err(Error::Dim { expected: w.cols(), found: u.len() });
    }
    let nu = norm(u);
    if (nu - 1.0).abs() > 1e-8 {
        return Err(Error::Norm { norm: nu });
    }
    let projections: Vec<f64> = w.iter_rows().map(|r| dot(r, u)).collect();
    log_sum_exp(&projections)
}

/// Isotropy of the rows of `w`, measured without any centering.
pub fn isotropy_score(w: &Matrix, sign_mode: SignMode) -> Result<IsotropyReport> {
    if w.rows() < 2 {
        return Err(Error::Cardinality(format!("isotropy needs at least 2 rows, got {}", w.rows())));
    }
    if w.cols() > w.rows() {
        log::warn!(
            "dimension {} exceeds row count {}; null-space directions are included",
            w.cols(),
            w.rows()
        );
    }
    let basis = gram_eigenbasis(w)?;
    let mut logs = Vec::with_capacity(2 * basis.rows());
    let mut projections = alloc::vec![0.0; w.rows()];
    for u in basis.iter_rows() {
        for (p, r) in projections.iter_mut().zip(w.iter_rows()) {
            *p = dot(r, u);
        }
        logs.push(log_sum_exp(&projections)?);
        if sign_mode == SignMode::BothSigns {
            for p in projections.iter_mut() {
                *p = -*p;
            }
            logs.push(log_sum_exp(&projections)?);
        }
    }
    Ok(IsotropyReport::from_logs(&logs, sign_mode))
}

/// [`isotropy_score`] of a store's embeddings.
pub fn store_isotropy(store: &EmbeddingStore, sign_mode: SignMode) -> Result<IsotropyReport> {
    isotropy_score(&store.to_matrix(), sign_mode)
}

/// One report per layer, in input order. All layers must share a width.
pub fn layer_sweep(layers: &[EmbeddingStore], sign_mode: SignMode) -> Result<Vec<IsotropyReport>> {
    let first = layers.first().ok_or(Error::EmptyInput)?;
    if let Some(bad) = layers.iter().find(|s| s.dim() != first.dim()) {
        return Err(Error::Dim { expected: first.dim(), found: bad.dim() });
    }
    layers.iter().map(|s| store_isotropy(s, sign_mode)).collect()
}
