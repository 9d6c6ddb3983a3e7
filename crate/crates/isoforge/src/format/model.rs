//! Binary files for fitted cluster models (`ISOK1`) and transforms
//! (`ISOT1`). Integers are fixed-width, reals are f64, all little-endian.
//!
//! Cluster block: u32 k, u32 D, u64 seed, u32 iterations_run, f64 objective,
//! k·D centroids, u32 n, n × u32 assignments.
//!
//! Transform: `ISOT1`, u8 kind (0 global, 1 cluster), u32 k, u32 D,
//! u32 m_requested, u64 seed, u64 fit fingerprint, the cluster block, k·D
//! means, then per cluster u32 count, u32 requested, count variances and
//! count·D components.

use std::path::Path;

use isoforge_core::{ClusterModel, FittedTransform, Matrix, PrincipalBasis, TransformKind};

use crate::error::{Error, Result};
use crate::format::codec::{Reader, Writer};
use crate::fsutil;

pub const CLUSTER_MAGIC: &[u8; 5] = b"ISOK1";
pub const TRANSFORM_MAGIC: &[u8; 5] = b"ISOT1";

fn write_cluster_block(w: &mut Writer, model: &ClusterModel) {
    w.count(model.k());
    w.count(model.dim());
    w.u64(model.seed());
    w.u32(model.iterations_run());
    w.f64(model.objective());
    w.matrix(model.centroids());
    w.count(model.assignments().len());
    for &a in model.assignments() {
        w.u32(a);
    }
}

fn read_cluster_block(r: &mut Reader<'_>) -> Result<ClusterModel> {
    let k = r.count()?;
    let d = r.count()?;
    let seed = r.u64()?;
    let iterations = r.u32()?;
    let objective = r.f64()?;
    let centroids = r.matrix(k, d)?;
    let n = r.count()?;
    let raw = r.take(n.checked_mul(4).ok_or_else(|| Error::format(r.path(), "assignment count overflows"))?)?;
    let assignments = raw.chunks_exact(4).map(|c| u32::from_le_bytes(c.try_into().unwrap())).collect();
    Ok(ClusterModel::from_parts(centroids, assignments, objective, seed, iterations)?)
}

pub fn encode_cluster_model(model: &ClusterModel) -> Vec<u8> {
    let mut w = Writer::default();
    w.bytes(CLUSTER_MAGIC);
    write_cluster_block(&mut w, model);
    w.buf
}

pub fn decode_cluster_model(bytes: &[u8], path: &Path) -> Result<ClusterModel> {
    let mut r = Reader::new(bytes, path);
    r.expect_magic(CLUSTER_MAGIC)?;
    let model = read_cluster_block(&mut r)?;
    r.finish()?;
    Ok(model)
}

pub fn encode_transform(t: &FittedTransform) -> Vec<u8> {
    let mut w = Writer::default();
    w.bytes(TRANSFORM_MAGIC);
    w.u8(match t.kind() {
        TransformKind::Global => 0,
        TransformKind::ClusterBased => 1,
    });
    w.count(t.k());
    w.count(t.dim());
    w.count(t.m_requested());
    w.u64(t.cluster_model().seed());
    w.u64(t.fit_fingerprint());
    write_cluster_block(&mut w, t.cluster_model());
    w.matrix(t.per_cluster_mean());
    for b in t.per_cluster_basis() {
        w.count(b.len());
        w.count(b.requested());
        for &v in b.variances() {
            w.f64(v);
        }
        w.matrix(b.components());
    }
    w.buf
}

pub fn decode_transform(bytes: &[u8], path: &Path) -> Result<FittedTransform> {
    let mut r = Reader::new(bytes, path);
    r.expect_magic(TRANSFORM_MAGIC)?;
    let kind = match r.u8()? {
        0 => TransformKind::Global,
        1 => TransformKind::ClusterBased,
        other => return Err(Error::format(path, format!("unknown transform kind {other}"))),
    };
    let k = r.count()?;
    let d = r.count()?;
    let m_requested = r.count()?;
    let seed = r.u64()?;
    let fingerprint = r.u64()?;
    let model = read_cluster_block(&mut r)?;
    if model.k() != k || model.dim() != d || model.seed() != seed {
        return Err(Error::format(path, "cluster block disagrees with the transform header"));
    }
    let means = r.matrix(k, d)?;
    let mut bases = Vec::with_capacity(k);
    for _ in 0..k {
        let count = r.count()?;
        let requested = r.count()?;
        let variances = (0..count).map(|_| r.f64()).collect::<Result<Vec<f64>>>()?;
        let components: Matrix = r.matrix(count, d)?;
        bases.push(PrincipalBasis::from_parts(components, variances, requested)?);
    }
    r.finish()?;
    Ok(FittedTransform::from_parts(kind, model, means, bases, m_requested, fingerprint)?)
}

pub fn save_cluster_model(model: &ClusterModel, path: &Path) -> Result<()> {
    fsutil::write_atomic(path, encode_cluster_model(model))
}

pub fn load_cluster_model(path: &Path) -> Result<ClusterModel> {
    decode_cluster_model(&fsutil::read(path)?, path)
}

pub fn save_transform(t: &FittedTransform, path: &Path) -> Result<()> {
    fsutil::write_atomic(path, encode_transform(t))
}

pub fn load_transform(path: &Path) -> Result<FittedTransform> {
    decode_transform(&fsutil::read(path)?, path)
}
