//! Deterministic synthetic fixtures: geometric point sets with known
//! isotropy behaviour and annotated stores for the analysis harnesses.
//!
//! Every generator is a pure function of its arguments and seed.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::matrix::{dot, norm, Matrix};
use crate::{EmbeddingStore, Tense, TokenMeta};

/// Seeded source of uniform and Gaussian draws.
#[derive(Debug, Clone)]
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    /// Uniform in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Uniform index in `0..n`.
    pub fn index(&mut self, n: usize) -> usize {
        ((u128::from(self.rng.next_u64()) * n as u128) >> 64) as usize
    }

    /// Standard normal draw (Box-Muller, cosine branch only).
    pub fn normal(&mut self) -> f64 {
        let u1 = 1.0 - self.uniform(); // (0, 1]
        let u2 = self.uniform();
        libm::sqrt(-2.0 * libm::log(u1)) * libm::cos(core::f64::consts::TAU * u2)
    }

    pub fn normal_vec(&mut self, d: usize, sigma: f64) -> Vec<f64> {
        (0..d).map(|_| sigma * self.normal()).collect()
    }

    /// Fisher-Yates shuffle.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.index(i + 1);
            items.swap(i, j);
        }
    }
}

/// The `2d` vertices `±eᵢ` of the cross polytope.
pub fn cross_polytope(d: usize) -> Matrix {
    let mut m = Matrix::zeros(2 * d, d);
    for i in 0..d {
        m[(2 * i, i)] = 1.0;
        m[(2 * i + 1, i)] = -1.0;
    }
    m
}

/// `n` points in a narrow positive cone: every coordinate is positive and
/// the first is at least five times any other.
pub fn narrow_cone(n: usize, d: usize, seed: u64) -> Matrix {
    let mut s = Sampler::new(seed);
    let mut m = Matrix::zeros(n, d);
    for i in 0..n {
        let row = m.row_mut(i);
        for v in row.iter_mut().skip(1) {
            *v = s.uniform_in(0.01, 1.0);
        }
        row[0] = s.uniform_in(5.0, 10.0);
    }
    m
}

/// Three narrow cones displaced by `offset` along distinct axes.
pub fn displaced_cones(n_per: usize, d: usize, offset: f64, seed: u64) -> Matrix {
    assert!(d >= 3);
    let mut rows = Vec::with_capacity(3 * n_per);
    for c in 0..3 {
        let cone = narrow_cone(n_per, d, seed.wrapping_add(c as u64 * 7919));
        for r in cone.iter_rows() {
            let mut row = r.to_vec();
            // rotate the cone axis onto coordinate c, then displace
            row.swap(0, c);
            row[c] += offset;
            rows.push(row);
        }
    }
    Matrix::from_rows(&rows).expect("rows have equal width")
}

/// A random orthogonal `d × d` matrix (Gram-Schmidt on Gaussian columns).
pub fn random_orthogonal(d: usize, seed: u64) -> Matrix {
    let mut s = Sampler::new(seed);
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(d);
    while basis.len() < d {
        let mut v = s.normal_vec(d, 1.0);
        for _ in 0..2 {
            for b in &basis {
                let c = dot(&v, b);
                for (x, y) in v.iter_mut().zip(b) {
                    *x -= c * y;
                }
            }
        }
        let n = norm(&v);
        if n > 1e-6 {
            basis.push(v.into_iter().map(|x| x / n).collect());
        }
    }
    Matrix::from_rows(&basis).expect("square")
}

/// Isotropic Gaussian noise plus a strong component along `direction`
/// (unit vector): `x = noise·σ + t·direction`, `t ~ N(0, (ratio·σ)²)`.
pub fn planted_direction(n: usize, direction: &[f64], sigma: f64, ratio: f64, seed: u64) -> Matrix {
    let d = direction.len();
    let mut s = Sampler::new(seed);
    let mut m = Matrix::zeros(n, d);
    for i in 0..n {
        let t = ratio * sigma * s.normal();
        let noise = s.normal_vec(d, sigma);
        for (j, v) in m.row_mut(i).iter_mut().enumerate() {
            *v = noise[j] + t * direction[j];
        }
    }
    m
}

/// Ground truth for [`planted_mixture`].
#[derive(Debug, Clone)]
pub struct PlantedMixture {
    pub data: Matrix,
    pub labels: Vec<usize>,
    /// Unit planted direction of each cluster.
    pub directions: Vec<Vec<f64>>,
}

/// Three clusters centred far apart, each elongated along its own planted
/// direction (standard deviation `ratio` against unit isotropic noise).
pub fn planted_mixture(n_per: usize, d: usize, seed: u64) -> PlantedMixture {
    assert!(d >= 6);
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    let mut directions = Vec::new();
    for c in 0..3 {
        let mut dir = vec![0.0; d];
        dir[3 + c] = 1.0;
        let mut center = vec![0.0; d];
        center[c] = 40.0;
        let block = planted_direction(n_per, &dir, 1.0, 6.0, seed.wrapping_mul(31).wrapping_add(c as u64));
        for r in block.iter_rows() {
            rows.push(r.iter().zip(&center).map(|(a, b)| a + b).collect::<Vec<f64>>());
            labels.push(c);
        }
        directions.push(dir);
    }
    PlantedMixture { data: Matrix::from_rows(&rows).expect("equal widths"), labels, directions }
}

/// Two Gaussian blobs of unit σ whose centres are `separation` σ apart.
pub fn two_blobs(n_per: usize, d: usize, separation: f64, seed: u64) -> (Matrix, Vec<usize>) {
    let mut s = Sampler::new(seed);
    let mut rows = Vec::with_capacity(2 * n_per);
    let mut labels = Vec::with_capacity(2 * n_per);
    for i in 0..2 * n_per {
        let label = i % 2;
        let mut r = s.normal_vec(d, 1.0);
        r[0] += label as f64 * separation;
        rows.push(r);
        labels.push(label);
    }
    (Matrix::from_rows(&rows).expect("equal widths"), labels)
}

/// Verb occurrences whose geometry is dominated by tense.
///
/// Three lemmas sit far apart. Within a lemma, the two tenses are separated
/// by `tense_offset` along one axis and the two senses by `sense_offset`
/// along another, with Gaussian noise of σ = 0.1. Each (tense, sense) cell
/// has `per_cell` occurrences.
pub fn tense_fixture(per_cell: usize, tense_offset: f64, sense_offset: f64, seed: u64) -> EmbeddingStore {
    const D: usize = 8;
    let mut s = Sampler::new(seed);
    let mut data = Vec::new();
    let mut meta = Vec::new();
    let lemmas = ["run", "draw", "serve"];
    let mut sentence = 0u64;
    for (l, lemma) in lemmas.iter().enumerate() {
        for tense in [Tense::Past, Tense::Present] {
            for sense in 0..2 {
                for _ in 0..per_cell {
                    let mut row = s.normal_vec(D, 0.1);
                    row[l] += 100.0;
                    row[6] += if tense == Tense::Past { -0.5 } else { 0.5 } * tense_offset;
                    row[7] += if sense == 0 { -0.5 } else { 0.5 } * sense_offset;
                    data.extend(row.iter().map(|&v| v as f32));
                    let mut m = TokenMeta::new(*lemma, sentence, 0);
                    m.lemma = Some(String::from(*lemma));
                    m.tense = Some(tense);
                    m.sense_id = Some(format!("{lemma}.v.0{}", sense + 1));
                    meta.push(m);
                    sentence += 1;
                }
            }
        }
    }
    EmbeddingStore::new(meta.len(), D, data, Some(meta)).expect("fixture is well formed")
}

/// Occurrences of `"."` in `groups × per_group` sentences. Each group owns a
/// random offset of scale `structure` in the first two coordinates, on top of
/// unit Gaussian noise in all `d`.
pub fn structural_groups(groups: usize, per_group: usize, d: usize, structure: f64, seed: u64) -> EmbeddingStore {
    let mut s = Sampler::new(seed);
    let mut data = Vec::new();
    let mut meta = Vec::new();
    for g in 0..groups {
        let offset = [structure * s.normal(), structure * s.normal()];
        for k in 0..per_group {
            let mut row = s.normal_vec(d, 1.0);
            row[0] += offset[0];
            row[1] += offset[1];
            data.extend(row.iter().map(|&v| v as f32));
            let mut m = TokenMeta::new(".", (g * per_group + k) as u64, 0);
            m.group_id = Some(g as i64);
            meta.push(m);
        }
    }
    EmbeddingStore::new(meta.len(), d, data, Some(meta)).expect("fixture is well formed")
}
