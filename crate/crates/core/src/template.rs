//! Template-based clustering.
//!
//! An observation graph with adjacency `A_O` (n vertices) is matched to a
//! k-vertex template `A_M` by minimising
//!
//! ```text
//! F(P) = ‖A_M − Pᵀ A_O P‖²_F
//! ```
//!
//! over orthonormal k-frames `P`. The rows of the optimised `P` embed the
//! observation vertices in ℝᵏ and k-means on those rows gives the partition.

use nalgebra::DMatrix;
use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::kmeans::{kmeans, KMeansConfig};
use crate::partition::Partition;
use crate::stiefel::{random_stiefel, steepest_descent, DescentConfig, DescentTrace, StiefelCost, StiefelPoint};

/// A `k × k` symmetric weight matrix: diagonal entries carry intra-community
/// mass (as self-loops), off-diagonal entries inter-community mass.
#[derive(Debug, Clone, PartialEq)]
pub struct TemplateModel {
    weights: DMatrix<f64>,
}

impl TemplateModel {
    pub fn new(weights: DMatrix<f64>) -> Result<Self> {
        let (r, c) = weights.shape();
        if r != c || r == 0 {
            return Err(Error::input(format!("template must be a non-empty square matrix, got {r}x{c}")));
        }
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::input("template weights must be finite"));
        }
        if weights != weights.transpose() {
            return Err(Error::input("template weights must be symmetric"));
        }
        Ok(TemplateModel { weights })
    }

    pub fn k(&self) -> usize {
        self.weights.nrows()
    }

    pub fn weights(&self) -> &DMatrix<f64> {
        &self.weights
    }

    /// Mean of the nonzero weights, 0 for an all-zero template.
    pub fn mean_nonzero_weight(&self) -> f64 {
        let nz: Vec<f64> = self.weights.iter().copied().filter(|w| *w != 0.0).collect();
        if nz.is_empty() {
            0.0
        } else {
            nz.iter().sum::<f64>() / nz.len() as f64
        }
    }
}

fn check_dims(a_o: &DMatrix<f64>, a_m: &TemplateModel, p: &DMatrix<f64>) -> Result<()> {
    let n = a_o.nrows();
    if a_o.ncols() != n || p.nrows() != n || p.ncols() != a_m.k() {
        return Err(Error::input(format!(
            "dimension mismatch: A_O is {:?}, A_M is {k}x{k}, P is {:?}",
            a_o.shape(),
            p.shape(),
            k = a_m.k()
        )));
    }
    Ok(())
}

/// `‖A_M − Pᵀ A_O P‖²_F`.
pub fn objective(a_o: &DMatrix<f64>, a_m: &TemplateModel, p: &DMatrix<f64>) -> Result<f64> {
    check_dims(a_o, a_m, p)?;
    Ok(objective_unchecked(a_o, &a_m.weights, p))
}

/// Euclidean gradient `4(A_O P Pᵀ A_O P − A_O P A_M)` for symmetric `A_O` and `A_M`.
pub fn euclidean_gradient(a_o: &DMatrix<f64>, a_m: &TemplateModel, p: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    check_dims(a_o, a_m, p)?;
    Ok(gradient_unchecked(a_o, &a_m.weights, p))
}

fn objective_unchecked(a_o: &DMatrix<f64>, a_m: &DMatrix<f64>, p: &DMatrix<f64>) -> f64 {
    let contracted = p.transpose() * (a_o * p);
    (a_m - contracted).norm_squared()
}

fn gradient_unchecked(a_o: &DMatrix<f64>, a_m: &DMatrix<f64>, p: &DMatrix<f64>) -> DMatrix<f64> {
    let ap = a_o * p;
    let contracted = p.transpose() * &ap;
    (&ap * (contracted - a_m)) * 4.0
}

/// The matching objective bound to one observation graph and template.
pub struct MatchingCost<'a> {
    a_o: &'a DMatrix<f64>,
    a_m: &'a DMatrix<f64>,
}

impl<'a> MatchingCost<'a> {
    pub fn new(g_o: &'a Graph, model: &'a TemplateModel) -> Self {
        MatchingCost {
            a_o: g_o.adjacency(),
            a_m: model.weights(),
        }
    }
}

impl StiefelCost for MatchingCost<'_> {
    fn cost(&self, p: &DMatrix<f64>) -> f64 {
        objective_unchecked(self.a_o, self.a_m, p)
    }

    fn euclidean_gradient(&self, p: &DMatrix<f64>) -> DMatrix<f64> {
        gradient_unchecked(self.a_o, self.a_m, p)
    }
}

#[derive(Debug, Clone)]
pub struct ClusteringResult {
    pub partition: Partition,
    pub embedding: StiefelPoint,
    pub trace: DescentTrace,
    pub kmeans_inertia: f64,
}

/// Optimises the matching objective from a random orthonormal frame, then
/// runs k-means on the rows of the optimised frame.
pub fn template_cluster<R: Rng + ?Sized>(
    g_o: &Graph,
    model: &TemplateModel,
    cfg: &DescentConfig,
    kmeans_cfg: &KMeansConfig,
    rng: &mut R,
) -> Result<ClusteringResult> {
    let (n, k) = (g_o.n(), model.k());
    if n <= k {
        return Err(Error::input(format!(
            "observation graph must have more vertices than the template ({n} <= {k})"
        )));
    }
    let p0 = random_stiefel(n, k, rng)?;
    let cost = MatchingCost::new(g_o, model);
    let (embedding, trace) = steepest_descent(&cost, p0, cfg)?;
    let km = kmeans(embedding.matrix(), k, kmeans_cfg, rng)?;
    Ok(ClusteringResult {
        partition: Partition::from_labels(&km.labels),
        embedding,
        trace,
        kmeans_inertia: km.inertia,
    })
}
