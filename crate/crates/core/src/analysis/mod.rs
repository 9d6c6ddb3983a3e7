//! Evaluation harnesses: STS correlation, kNN structural-group purity, verb
//! tense distances and the 2-D frequency projection.

mod knn;
mod projection;
mod sts;
mod tense;

pub use knn::{knn_group_purity, Candidates};
pub use projection::{project_2d, ProjectedPoint};
pub use sts::{eval_sts, sentence_embedding, sentence_embeddings, StsDataset, StsPair};
pub use tense::{tense_bias, TenseBiasConfig, TenseBiasReport};
