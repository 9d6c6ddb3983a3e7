mod codec;
pub mod model;
pub mod store;
pub mod sts;

pub use model::{
    decode_cluster_model, decode_transform, encode_cluster_model, encode_transform, load_cluster_model,
    load_transform, save_cluster_model, save_transform,
};
pub use store::{load_store, save_store, sidecar_path};
pub use sts::load_sts;
