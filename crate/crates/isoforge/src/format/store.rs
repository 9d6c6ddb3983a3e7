//! The `ISOF` matrix file and its JSONL metadata sidecar.
//!
//! Layout: `ISOF`, version byte 1, u32 N, u32 D, then N·D f32 values, all
//! little-endian and row-major. The sidecar lives at the matrix path with
//! `.meta.jsonl` appended and holds one JSON object per row.

use std::path::{Path, PathBuf};

use isoforge_core::{EmbeddingStore, TokenMeta};

use crate::error::{Error, Result};
use crate::format::codec::{Reader, Writer};
use crate::fsutil;

pub const MAGIC: &[u8; 4] = b"ISOF";
pub const VERSION: u8 = 1;
pub const HEADER_LEN: usize = 13;

pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".meta.jsonl");
    PathBuf::from(s)
}

pub fn encode_matrix(store: &EmbeddingStore) -> Vec<u8> {
    let mut w = Writer::default();
    w.bytes(MAGIC);
    w.u8(VERSION);
    w.count(store.n_rows());
    w.count(store.dim());
    w.buf.reserve(store.data().len() * 4);
    for v in store.data() {
        w.bytes(&v.to_le_bytes());
    }
    w.buf
}

pub fn encode_sidecar(meta: &[TokenMeta]) -> Vec<u8> {
    let mut out = Vec::new();
    for m in meta {
        serde_json::to_writer(&mut out, m).expect("metadata serializes");
        out.push(b'\n');
    }
    out
}

/// Parses an `ISOF` payload into `(n_rows, dim, values)`.
pub fn decode_matrix(bytes: &[u8], path: &Path) -> Result<(usize, usize, Vec<f32>)> {
    let mut r = Reader::new(bytes, path);
    r.expect_magic(MAGIC)?;
    let version = r.u8()?;
    if version != VERSION {
        return Err(Error::format(path, format!("unsupported version {version}")));
    }
    let n = r.count()?;
    let d = r.count()?;
    let expected = (n as u64) * (d as u64) * 4;
    let found = (bytes.len() - HEADER_LEN) as u64;
    if found != expected {
        return Err(Error::Truncation { path: path.into(), expected, found });
    }
    let data: Vec<f32> = bytes[HEADER_LEN..]
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes(c.try_into().unwrap()))
        .collect();
    check_finite(&data, d, path)?;
    Ok((n, d, data))
}

fn check_finite(data: &[f32], d: usize, path: &Path) -> Result<()> {
    match data.iter().position(|v| !v.is_finite()) {
        Some(i) => Err(Error::Value { path: path.into(), row: i / d, col: i % d }),
        None => Ok(()),
    }
}

/// Tab-separated reals, one row per line. Blank lines are skipped.
pub fn parse_tsv(text: &str, path: &Path) -> Result<(usize, usize, Vec<f32>)> {
    let mut data = Vec::new();
    let mut dim = None;
    let mut rows = 0;
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let start = data.len();
        for field in line.split('\t') {
            let v: f32 = field.trim().parse().map_err(|_| Error::Parse {
                path: path.into(),
                line: i + 1,
                reason: format!("not a real number: {field:?}"),
            })?;
            if !v.is_finite() {
                return Err(Error::Value { path: path.into(), row: rows, col: data.len() - start });
            }
            data.push(v);
        }
        let width = data.len() - start;
        if *dim.get_or_insert(width) != width {
            return Err(Error::Parse {
                path: path.into(),
                line: i + 1,
                reason: format!("{width} columns, expected {}", dim.unwrap()),
            });
        }
        rows += 1;
    }
    Ok((rows, dim.unwrap_or(0), data))
}

pub fn parse_sidecar(text: &str, path: &Path) -> Result<Vec<TokenMeta>> {
    text.lines()
        .enumerate()
        .map(|(i, line)| {
            serde_json::from_str(line).map_err(|e| Error::Parse { path: path.into(), line: i + 1, reason: e.to_string() })
        })
        .collect()
}

/// Reads a store. Files without the magic are accepted as TSV when their
/// extension is `.tsv`. Metadata is attached when a sidecar exists.
pub fn load_store(path: &Path) -> Result<EmbeddingStore> {
    let bytes = fsutil::read(path)?;
    let (n, d, data) = if bytes.starts_with(MAGIC) {
        decode_matrix(&bytes, path)?
    } else if path.extension().is_some_and(|e| e == "tsv") {
        let text = String::from_utf8(bytes).map_err(|_| Error::format(path, "TSV input is not UTF-8"))?;
        parse_tsv(&text, path)?
    } else {
        return Err(Error::format(path, "bad magic, expected \"ISOF\""));
    };
    let side = sidecar_path(path);
    let meta = if side.exists() {
        let meta = parse_sidecar(&fsutil::read_text(&side)?, &side)?;
        if meta.len() != n {
            return Err(Error::format(&side, format!("{} records for {n} rows", meta.len())));
        }
        Some(meta)
    } else {
        None
    };
    Ok(EmbeddingStore::new(n, d, data, meta)?)
}

/// Files that [`save_store`] writes, for callers batching several outputs.
pub fn store_files(store: &EmbeddingStore, path: &Path) -> Vec<(PathBuf, Vec<u8>)> {
    let mut files = vec![(path.to_path_buf(), encode_matrix(store))];
    if let Some(meta) = store.meta() {
        files.push((sidecar_path(path), encode_sidecar(meta)));
    }
    files
}

/// Writes the matrix and, when metadata is present, the sidecar. A stale
/// sidecar from an earlier save is removed when the store has none, so the
/// pair on disk always loads back to `store`.
pub fn save_store(store: &EmbeddingStore, path: &Path) -> Result<()> {
    fsutil::write_all_atomic(&store_files(store, path))?;
    clear_stale_sidecar(store, path)
}

pub(crate) fn clear_stale_sidecar(store: &EmbeddingStore, path: &Path) -> Result<()> {
    let side = sidecar_path(path);
    if store.meta().is_none() && side.exists() {
        std::fs::remove_file(&side).map_err(|e| Error::io(&side, e))?;
    }
    Ok(())
}
