use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::isotropy::{isotropy_score, SignMode};
use crate::matrix::{squared_distance, Matrix};
use crate::{EmbeddingStore, Error, Result, Tense};

/// Which lemmas enter the tense analysis: a lemma qualifies when at least
/// `min_senses` of its senses occur at least `min_occurrences` times each.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TenseBiasConfig {
    pub min_senses: usize,
    pub min_occurrences: usize,
}

impl Default for TenseBiasConfig {
    fn default() -> Self {
        Self { min_senses: 2, min_occurrences: 10 }
    }
}

/// Mean Euclidean distances between occurrences of the same verb lemma.
#[derive(Debug, Clone, PartialEq)]
pub struct TenseBiasReport {
    /// Same tense, same sense.
    pub st_sm: f64,
    /// Same tense, different sense.
    pub st_dm: f64,
    /// Different tense, same sense.
    pub dt_sm: f64,
    /// Number of qualifying lemmas.
    pub n_verbs: usize,
    /// Number of occurrences across qualifying lemmas.
    pub n_occurrences: usize,
    /// Isotropy of the analyzed verb rows.
    pub isotropy: f64,
    pub lemmas: Vec<String>,
}

struct Occurrence<'a> {
    row: usize,
    tense: Tense,
    sense: &'a str,
}

#[derive(Default)]
struct Mean {
    sum: f64,
    count: usize,
}

impl Mean {
    fn push(&mut self, v: f64) {
        self.sum += v;
        self.count += 1;
    }

    fn get(&self) -> Option<f64> {
        (self.count > 0).then(|| self.sum / self.count as f64)
    }
}

/// For every occurrence of a qualifying lemma, the mean distance to the other
/// occurrences of that lemma under each tense/sense condition; the report
/// holds the grand mean of those per-occurrence means.
///
/// Lemmas that do not qualify are skipped. If none qualifies, or a condition
/// has no pairs at all, the error names the offending lemmas.
pub fn tense_bias(store: &EmbeddingStore, config: &TenseBiasConfig) -> Result<TenseBiasReport> {
    let meta = store.require_meta("tense_bias")?;
    let mut by_lemma: BTreeMap<&str, Vec<Occurrence<'_>>> = BTreeMap::new();
    for (row, m) in meta.iter().enumerate() {
        if let (Some(lemma), Some(tense), Some(sense)) = (&m.lemma, m.tense, &m.sense_id) {
            by_lemma.entry(lemma).or_default().push(Occurrence { row, tense, sense });
        }
    }
    if by_lemma.is_empty() {
        return Err(Error::InsufficientAnnotation {
            lemma: String::new(),
            reason: "no rows carry lemma, tense and sense_id".to_string(),
        });
    }

    let mut qualifying = Vec::new();
    let mut rejected = Vec::new();
    for (lemma, occ) in &by_lemma {
        let mut per_sense: BTreeMap<&str, usize> = BTreeMap::new();
        for o in occ {
            *per_sense.entry(o.sense).or_default() += 1;
        }
        let frequent = per_sense.values().filter(|&&n| n >= config.min_occurrences).count();
        if frequent >= config.min_senses {
            qualifying.push(*lemma);
        } else {
            log::debug!("skipping lemma {lemma}: {frequent} frequent senses");
            rejected.push(format!("{lemma} ({frequent} senses with >= {} occurrences)", config.min_occurrences));
        }
    }
    if qualifying.is_empty() {
        return Err(Error::InsufficientAnnotation {
            lemma: rejected.join(", "),
            reason: format!("need at least {} senses occurring at least {} times", config.min_senses, config.min_occurrences),
        });
    }

    let rows: Vec<Vec<f64>> = (0..store.n_rows())
        .map(|i| store.row(i).iter().map(|&v| f64::from(v)).collect())
        .collect();
    let dist = |a: usize, b: usize| libm::sqrt(squared_distance(&rows[a], &rows[b]));

    let (mut st_sm, mut st_dm, mut dt_sm) = (Mean::default(), Mean::default(), Mean::default());
    let mut verb_rows = Vec::new();
    for lemma in &qualifying {
        let occ = &by_lemma[lemma];
        for (i, o) in occ.iter().enumerate() {
            let (mut a, mut b, mut c) = (Mean::default(), Mean::default(), Mean::default());
            for (j, p) in occ.iter().enumerate() {
                if i == j {
                    continue;
                }
                let d = dist(o.row, p.row);
                match (o.tense == p.tense, o.sense == p.sense) {
                    (true, true) => a.push(d),
                    (true, false) => b.push(d),
                    (false, true) => c.push(d),
                    (false, false) => {}
                }
            }
            if let Some(v) = a.get() {
                st_sm.push(v);
            }
            if let Some(v) = b.get() {
                st_dm.push(v);
            }
            if let Some(v) = c.get() {
                dt_sm.push(v);
            }
            verb_rows.push(o.row);
        }
    }
    let missing = |name: &str| Error::InsufficientAnnotation {
        lemma: qualifying.join(", "),
        reason: format!("no occurrence pairs for the {name} condition"),
    };
    let st_sm = st_sm.get().ok_or_else(|| missing("same-tense same-sense"))?;
    let st_dm = st_dm.get().ok_or_else(|| missing("same-tense different-sense"))?;
    let dt_sm = dt_sm.get().ok_or_else(|| missing("different-tense same-sense"))?;

    let verbs = Matrix::from_rows(&verb_rows.iter().map(|&r| rows[r].clone()).collect::<Vec<_>>())?;
    let isotropy = isotropy_score(&verbs, SignMode::BothSigns)?.score;

    Ok(TenseBiasReport {
        st_sm,
        st_dm,
        dt_sm,
        n_verbs: qualifying.len(),
        n_occurrences: verb_rows.len(),
        isotropy,
        lemmas: qualifying.iter().map(|s| s.to_string()).collect(),
    })
}
