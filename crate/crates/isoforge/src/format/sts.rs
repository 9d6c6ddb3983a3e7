//! STS pair files: `score<TAB>sentence_a<TAB>sentence_b`, with sentences
//! resolved to store sentence ids through an `id<TAB>text` mapping file.
//! A first line whose score column reads `score` is taken as a header.

use std::collections::HashMap;
use std::path::Path;

use isoforge_core::analysis::{StsDataset, StsPair};

use crate::error::{Error, Result};
use crate::fsutil;

fn parse_err(path: &Path, line: usize, reason: impl Into<String>) -> Error {
    Error::Parse { path: path.into(), line, reason: reason.into() }
}

/// Maps sentence text to its id. The same text under two ids is ambiguous
/// and rejected.
pub fn parse_sentence_ids(text: &str, path: &Path) -> Result<HashMap<String, u64>> {
    let mut ids = HashMap::new();
    for (i, line) in text.lines().enumerate() {
        if line.is_empty() {
            continue;
        }
        let (id, sentence) = line.split_once('\t').ok_or_else(|| parse_err(path, i + 1, "expected id<TAB>text"))?;
        let id: u64 = id.trim().parse().map_err(|_| parse_err(path, i + 1, format!("bad sentence id {id:?}")))?;
        if let Some(prev) = ids.insert(sentence.to_owned(), id) {
            if prev != id {
                return Err(parse_err(path, i + 1, format!("text mapped to both {prev} and {id}")));
            }
        }
    }
    Ok(ids)
}

pub fn parse_pairs(text: &str, path: &Path, ids: &HashMap<String, u64>) -> Result<StsDataset> {
    let mut pairs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        let [score, a, b] = fields[..] else {
            return Err(parse_err(path, i + 1, format!("expected 3 columns, found {}", fields.len())));
        };
        if i == 0 && score.trim().eq_ignore_ascii_case("score") {
            continue;
        }
        let gold: f64 = score.trim().parse().map_err(|_| parse_err(path, i + 1, format!("bad score {score:?}")))?;
        let lookup = |s: &str| ids.get(s).copied().ok_or_else(|| parse_err(path, i + 1, format!("unmapped sentence {s:?}")));
        pairs.push(StsPair { sentence_a: lookup(a)?, sentence_b: lookup(b)?, gold });
    }
    StsDataset::new(pairs).map_err(|e| match e {
        isoforge_core::Error::EmptyInput => Error::format(path, "no sentence pairs"),
        other => other.into(),
    })
}

pub fn load_sts(pairs: &Path, sentences: &Path) -> Result<StsDataset> {
    let ids = parse_sentence_ids(&fsutil::read_text(sentences)?, sentences)?;
    parse_pairs(&fsutil::read_text(pairs)?, pairs, &ids)
}
