//! Isotropy measurement and cluster-based isotropy enhancement for contextual
//! embedding spaces.
//!
//! The crate is `no_std` and only needs `alloc`. Everything that touches the
//! filesystem (store files, sidecars, the CLI) lives in the `isoforge` crate.
//!
//! Layout:
//!
//! - [`matrix`] and [`kernels`]: dense 64-bit matrices and the reduction
//!   kernels (log-sum-exp, centering, cosine, Euclidean, Spearman).
//! - [`pca`]: thin SVD, principal bases and component removal.
//! - [`isotropy`]: the partition function `F(u) = Σ exp(uᵀwᵢ)` over the
//!   eigenvectors of `WᵀW` and the min/max ratio score.
//! - [`cluster`]: seeded k-means++ / Lloyd and local isotropy.
//! - [`transform`]: global and cluster-based dominant-direction removal.
//! - [`analysis`]: STS, kNN group purity, verb tense distances, 2-D projection.
#![no_std]
#![warn(missing_debug_implementations)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod analysis;
pub mod cluster;
pub mod config;
mod error;
pub mod isotropy;
pub mod kernels;
pub mod matrix;
pub mod pca;
pub mod store;
pub mod synth;
pub mod transform;

pub use cluster::{kmeans_assign, kmeans_fit, local_isotropy, ClusterModel};
pub use error::{Error, Result};
pub use isotropy::{isotropy_score, layer_sweep, partition_log, IsotropyReport, SignMode};
pub use matrix::Matrix;
pub use pca::{principal_components, remove_components, PrincipalBasis};
pub use store::{EmbeddingStore, Tense, TokenMeta};
pub use transform::{fit_cluster_based, fit_global, FittedTransform, TransformKind};
