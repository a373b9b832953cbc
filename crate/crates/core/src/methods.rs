//! Clustering methods behind a common trait, looked up by name.
//!
//! The harness and the command line only ever see `dyn ClusteringMethod`, so a
//! new method is added by implementing the trait and registering it.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::RngCore;

use crate::baselines::{cnm_cluster, louvain_cluster, spectral_cluster};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::kmeans::KMeansConfig;
use crate::partition::Partition;
use crate::stiefel::{DescentConfig, StiefelPoint};
use crate::template::{template_cluster, TemplateModel};

/// One clustering problem. Methods that do not use a template still read the
/// community count from it.
#[derive(Debug, Clone, Copy)]
pub struct ClusterTask<'a> {
    pub graph: &'a Graph,
    pub model: &'a TemplateModel,
}

impl ClusterTask<'_> {
    pub fn k(&self) -> usize {
        self.model.k()
    }
}

#[derive(Debug, Clone)]
pub struct MethodOutput {
    pub partition: Partition,
    /// Orthonormal embedding the partition was read from, for methods that have one.
    pub embedding: Option<StiefelPoint>,
    /// Optimiser iterations, for iterative methods.
    pub iterations: Option<usize>,
}

pub trait ClusteringMethod: Send + Sync {
    fn name(&self) -> &'static str;

    fn cluster(&self, task: &ClusterTask<'_>, rng: &mut dyn RngCore) -> Result<MethodOutput>;
}

/// Template matching on the Stiefel manifold followed by k-means.
#[derive(Debug, Clone, Default)]
pub struct TemplateMethod {
    pub descent: DescentConfig,
    pub kmeans: KMeansConfig,
}

impl ClusteringMethod for TemplateMethod {
    fn name(&self) -> &'static str {
        "tb"
    }

    fn cluster(&self, task: &ClusterTask<'_>, rng: &mut dyn RngCore) -> Result<MethodOutput> {
        let res = template_cluster(task.graph, task.model, &self.descent, &self.kmeans, rng)?;
        Ok(MethodOutput {
            partition: res.partition,
            iterations: Some(res.trace.iterates_count),
            embedding: Some(res.embedding),
        })
    }
}

#[derive(Debug, Clone, Default)]
pub struct SpectralMethod {
    pub kmeans: KMeansConfig,
}

impl ClusteringMethod for SpectralMethod {
    fn name(&self) -> &'static str {
        "spectral"
    }

    fn cluster(&self, task: &ClusterTask<'_>, rng: &mut dyn RngCore) -> Result<MethodOutput> {
        let res = spectral_cluster(task.graph, task.k(), &self.kmeans, rng)?;
        Ok(MethodOutput {
            partition: res.partition,
            embedding: Some(res.embedding),
            iterations: None,
        })
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct CnmMethod;

impl ClusteringMethod for CnmMethod {
    fn name(&self) -> &'static str {
        "cnm"
    }

    fn cluster(&self, task: &ClusterTask<'_>, _rng: &mut dyn RngCore) -> Result<MethodOutput> {
        Ok(MethodOutput {
            partition: cnm_cluster(task.graph)?,
            embedding: None,
            iterations: None,
        })
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct LouvainMethod;

impl ClusteringMethod for LouvainMethod {
    fn name(&self) -> &'static str {
        "louvain"
    }

    fn cluster(&self, task: &ClusterTask<'_>, rng: &mut dyn RngCore) -> Result<MethodOutput> {
        Ok(MethodOutput {
            partition: louvain_cluster(task.graph, rng)?,
            embedding: None,
            iterations: None,
        })
    }
}

#[derive(Clone, Default)]
pub struct MethodRegistry {
    methods: BTreeMap<&'static str, Arc<dyn ClusteringMethod>>,
}

impl MethodRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// `tb`, `spectral`, `cnm` and `louvain` with default settings.
    pub fn with_builtins() -> Self {
        let mut r = Self::new();
        r.register(Arc::new(TemplateMethod::default()));
        r.register(Arc::new(SpectralMethod::default()));
        r.register(Arc::new(CnmMethod));
        r.register(Arc::new(LouvainMethod));
        r
    }

    /// Adds `method`, replacing any method already registered under its name.
    pub fn register(&mut self, method: Arc<dyn ClusteringMethod>) {
        self.methods.insert(method.name(), method);
    }

    pub fn get(&self, name: &str) -> Result<Arc<dyn ClusteringMethod>> {
        self.methods
            .get(name)
            .cloned()
            .ok_or_else(|| Error::UnknownMethod(name.to_string()))
    }

    /// Resolves every name, failing on the first unknown one.
    pub fn resolve<S: AsRef<str>>(&self, names: &[S]) -> Result<Vec<Arc<dyn ClusteringMethod>>> {
        if names.is_empty() {
            return Err(Error::input("no methods selected"));
        }
        names.iter().map(|n| self.get(n.as_ref())).collect()
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.methods.keys().copied().collect()
    }
}
