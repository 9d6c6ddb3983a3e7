#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use isoforge::format::save_store;
use isoforge_core::synth::Sampler;
use isoforge_core::{EmbeddingStore, Matrix, TokenMeta};

pub fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_isoforge"));
    c.env_remove("ISOFORGE_THREADS");
    c
}

pub fn run(args: &[&str], cwd: &Path) -> Output {
    bin().args(args).current_dir(cwd).output().expect("binary runs")
}

pub fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

pub fn random_store(n: usize, d: usize, seed: u64, with_meta: bool) -> EmbeddingStore {
    let mut s = Sampler::new(seed);
    let data = (0..n * d).map(|_| s.normal() as f32).collect();
    let meta = with_meta.then(|| {
        (0..n)
            .map(|i| {
                let mut m = TokenMeta::new(["the", ".", ",", "of"][i % 4], (i / 7) as u64, (i % 7) as u32);
                m.frequency = Some(s.index(1000) as u64);
                if i % 3 == 0 {
                    m.group_id = Some(s.index(5) as i64);
                }
                m
            })
            .collect()
    });
    EmbeddingStore::new(n, d, data, meta).unwrap()
}

pub fn write(store: &EmbeddingStore, dir: &Path, name: &str) -> PathBuf {
    let p = dir.join(name);
    save_store(store, &p).unwrap();
    p
}

/// Every regular file under `dir`, sorted.
pub fn listing(dir: &Path) -> Vec<String> {
    let mut v: Vec<String> =
        std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().file_name().to_string_lossy().into_owned()).collect();
    v.sort();
    v
}

pub fn matrix_of(rows: &[Vec<f64>]) -> Matrix {
    Matrix::from_rows(rows).unwrap()
}
