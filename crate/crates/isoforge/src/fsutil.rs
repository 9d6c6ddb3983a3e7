//! All-or-nothing file output: every file is written to a temporary sibling
//! and renamed into place only after all of them were written.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

fn temp_sibling(path: &Path) -> PathBuf {
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!(".{name}.{}.tmp", std::process::id()))
}

/// Writes every `(path, bytes)` pair, or none of them.
pub fn write_all_atomic(files: &[(PathBuf, Vec<u8>)]) -> Result<()> {
    let mut staged = Vec::with_capacity(files.len());
    let result = (|| {
        for (path, bytes) in files {
            let tmp = temp_sibling(path);
            staged.push(tmp.clone());
            let mut f = fs::File::create(&tmp).map_err(|e| Error::io(path, e))?;
            f.write_all(bytes).and_then(|_| f.sync_all()).map_err(|e| Error::io(path, e))?;
        }
        for ((path, _), tmp) in files.iter().zip(&staged) {
            fs::rename(tmp, path).map_err(|e| Error::io(path, e))?;
        }
        Ok(())
    })();
    if result.is_err() {
        for tmp in &staged {
            let _ = fs::remove_file(tmp);
        }
    }
    result
}

pub fn write_atomic(path: &Path, bytes: Vec<u8>) -> Result<()> {
    write_all_atomic(&[(path.to_path_buf(), bytes)])
}

pub fn read(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|e| Error::io(path, e))
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}
