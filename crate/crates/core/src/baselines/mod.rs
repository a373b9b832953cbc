//! Comparison methods: unnormalised spectral clustering and modularity maximisation.

pub mod cnm;
pub mod louvain;
pub mod modularity;
pub mod spectral;

pub use cnm::cnm_cluster;
pub use louvain::louvain_cluster;
pub use modularity::modularity;
pub use spectral::{laplacian_embedding, spectral_cluster, SpectralResult};
