//! Template-based graph clustering.
//!
//! An observation graph is clustered by finding the orthonormal matrix `P`
//! that best matches a small template adjacency `A_M` to `Pᵀ A_O P`, then
//! running k-means on the rows of `P`. Spectral clustering, CNM and Louvain
//! are provided as baselines, along with synthetic community generators,
//! agreement metrics and an experiment harness.

pub mod baselines;
pub mod dataio;
pub mod error;
pub mod graph;
pub mod harness;
pub mod kmeans;
pub mod methods;
pub mod metrics;
pub mod partition;
pub mod stiefel;
pub mod synth;
pub mod template;

pub use error::{Error, Result};
pub use nalgebra;
pub use graph::{build_graph, Graph};
pub use methods::{ClusterTask, ClusteringMethod, MethodOutput, MethodRegistry};
pub use partition::{GroundTruth, Partition};
pub use stiefel::{DescentConfig, StiefelPoint};
pub use template::TemplateModel;
