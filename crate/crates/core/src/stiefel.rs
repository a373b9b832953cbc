//! Steepest descent on the Stiefel manifold `St(n, k) = {P ∈ ℝⁿˣᵏ : PᵀP = I_k}`.
//!
//! The geometry is the embedded one: the Riemannian gradient is the Euclidean
//! gradient projected onto the tangent space `{ξ : Pᵀξ + ξᵀP = 0}`, and points
//! are moved with the QR retraction `R_P(ξ) = qf(P + ξ)`.
//!
//! Step sizes come from Armijo backtracking, so every accepted iterate strictly
//! lowers the cost and the recorded cost history is non-increasing.

use std::fmt;

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Orthonormality tolerance enforced on every point handed out by this module.
pub const ORTHONORMALITY_TOL: f64 = 1e-10;

/// An `n × k` matrix with orthonormal columns.
#[derive(Debug, Clone, PartialEq)]
pub struct StiefelPoint(DMatrix<f64>);

impl StiefelPoint {
    /// Checks `‖PᵀP − I‖_F ≤ 1e-10` before accepting the matrix.
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        if matrix.ncols() == 0 || matrix.nrows() < matrix.ncols() {
            return Err(Error::input(format!(
                "a Stiefel point needs n >= k >= 1, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let err = orthonormality_error(&matrix);
        if err.is_nan() || err > ORTHONORMALITY_TOL {
            return Err(Error::numerical(format!(
                "columns are not orthonormal: ||PᵀP - I||_F = {err:e}"
            )));
        }
        Ok(StiefelPoint(matrix))
    }

    pub fn n(&self) -> usize {
        self.0.nrows()
    }

    pub fn k(&self) -> usize {
        self.0.ncols()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.0
    }

    pub fn orthonormality_error(&self) -> f64 {
        orthonormality_error(&self.0)
    }
}

impl AsRef<DMatrix<f64>> for StiefelPoint {
    fn as_ref(&self) -> &DMatrix<f64> {
        &self.0
    }
}

/// `‖MᵀM − I‖_F`.
pub fn orthonormality_error(m: &DMatrix<f64>) -> f64 {
    let k = m.ncols();
    (m.transpose() * m - DMatrix::<f64>::identity(k, k)).norm()
}

fn sym(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

/// Thin QR of `m` with the diagonal of `R` made nonnegative, returning the Q factor.
fn qf(m: DMatrix<f64>) -> Result<DMatrix<f64>> {
    let (n, k) = m.shape();
    let scale = m.norm().max(1.0);
    if !scale.is_finite() {
        return Err(Error::numerical("QR input contains non-finite values"));
    }
    let qr = m.qr();
    let r = qr.r();
    let mut q = qr.q();
    debug_assert_eq!(q.shape(), (n, k));
    for j in 0..k {
        let d = r[(j, j)];
        if d.abs() <= 1e-12 * scale {
            return Err(Error::numerical(format!(
                "matrix is rank deficient (|R[{j},{j}]| = {:e})",
                d.abs()
            )));
        }
        if d < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    Ok(q)
}

/// Samples a point from the uniform (Haar) distribution on `St(n, k)`: the
/// sign-normalised Q factor of an `n × k` standard Gaussian matrix.
pub fn random_stiefel<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Result<StiefelPoint> {
    if k == 0 || n < k {
        return Err(Error::input(format!("random_stiefel needs n >= k >= 1, got n={n}, k={k}")));
    }
    let g = DMatrix::from_fn(n, k, |_, _| rng.sample::<f64, _>(StandardNormal));
    StiefelPoint::new(qf(g)?)
}

/// Orthogonal projection onto the tangent space at `p`: `g − P·sym(Pᵀg)`.
pub fn project_tangent(p: &StiefelPoint, g: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    if g.shape() != p.0.shape() {
        return Err(Error::input(format!(
            "gradient shape {:?} does not match point shape {:?}",
            g.shape(),
            p.0.shape()
        )));
    }
    let ptg = p.0.transpose() * g;
    Ok(g - &p.0 * sym(&ptg))
}

/// QR retraction `qf(P + v)`. `v` is expected to be tangent at `p`; this is not checked.
pub fn retract_qr(p: &StiefelPoint, v: &DMatrix<f64>) -> Result<StiefelPoint> {
    if v.shape() != p.0.shape() {
        return Err(Error::input(format!(
            "displacement shape {:?} does not match point shape {:?}",
            v.shape(),
            p.0.shape()
        )));
    }
    let q = qf(&p.0 + v)?;
    let point = StiefelPoint::new(q)?;
    debug_assert!(point.orthonormality_error() <= ORTHONORMALITY_TOL);
    Ok(point)
}

/// A smooth cost on `ℝⁿˣᵏ` restricted to the manifold.
pub trait StiefelCost {
    fn cost(&self, p: &DMatrix<f64>) -> f64;
    fn euclidean_gradient(&self, p: &DMatrix<f64>) -> DMatrix<f64>;
}

/// Adapts a pair of closures to [`StiefelCost`].
pub struct FnCost<F, G> {
    pub cost: F,
    pub gradient: G,
}

impl<F, G> StiefelCost for FnCost<F, G>
where
    F: Fn(&DMatrix<f64>) -> f64,
    G: Fn(&DMatrix<f64>) -> DMatrix<f64>,
{
    fn cost(&self, p: &DMatrix<f64>) -> f64 {
        (self.cost)(p)
    }

    fn euclidean_gradient(&self, p: &DMatrix<f64>) -> DMatrix<f64> {
        (self.gradient)(p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DescentConfig {
    pub max_iters: usize,
    /// Stop once the Riemannian gradient's Frobenius norm falls to this value.
    pub grad_tol: f64,
    /// Stop once `|c_t − c_{t−1}| ≤ rel_cost_tol · max(1, |c_{t−1}|)`.
    pub rel_cost_tol: f64,
    pub armijo_initial_step: f64,
    pub armijo_shrink: f64,
    pub armijo_slope: f64,
    pub armijo_max_backtracks: usize,
}

impl Default for DescentConfig {
    fn default() -> Self {
        DescentConfig {
            max_iters: 1000,
            grad_tol: 1e-6,
            rel_cost_tol: 1e-9,
            armijo_initial_step: 1.0,
            armijo_shrink: 0.5,
            armijo_slope: 1e-4,
            armijo_max_backtracks: 50,
        }
    }
}

impl DescentConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::input(format!("{name} must be a positive finite number, got {v}")))
            }
        };
        positive("grad_tol", self.grad_tol)?;
        positive("rel_cost_tol", self.rel_cost_tol)?;
        positive("armijo_initial_step", self.armijo_initial_step)?;
        for (name, v) in [("armijo_shrink", self.armijo_shrink), ("armijo_slope", self.armijo_slope)] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::input(format!("{name} must lie in (0, 1), got {v}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConvergedBy {
    Gradient,
    RelativeCost,
    MaxIters,
}

impl fmt::Display for ConvergedBy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConvergedBy::Gradient => "gradient",
            ConvergedBy::RelativeCost => "relative-cost",
            ConvergedBy::MaxIters => "max-iters",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DescentTrace {
    /// Number of accepted steps.
    pub iterates_count: usize,
    /// Cost at the initial point followed by the cost after each accepted step.
    pub cost_history: Vec<f64>,
    pub final_grad_norm: f64,
    pub converged_by: ConvergedBy,
    /// Set when Armijo backtracking ran out of trials; the run then stops at
    /// the current iterate and reports `RelativeCost`.
    pub line_search_failed: bool,
    /// Largest `‖PᵀP − I‖_F` seen over all accepted iterates.
    pub max_orthonormality_error: f64,
}

impl DescentTrace {
    pub fn final_cost(&self) -> f64 {
        *self.cost_history.last().expect("history holds at least the initial cost")
    }
}

/// Riemannian steepest descent with QR retraction and Armijo backtracking.
///
/// Each iteration steps along the negative Riemannian gradient:
/// `P_{t+1} = R_{P_t}(−η_t ∇_t)`, with `η_t` the first of
/// `η₀, η₀·shrink, η₀·shrink², …` satisfying the sufficient-decrease test.
pub fn steepest_descent<C: StiefelCost + ?Sized>(
    cost: &C,
    p0: StiefelPoint,
    cfg: &DescentConfig,
) -> Result<(StiefelPoint, DescentTrace)> {
    cfg.validate()?;
    let mut p = p0;
    let mut current = cost.cost(p.matrix());
    if !current.is_finite() {
        return Err(Error::numerical("cost is not finite at the initial point"));
    }
    let mut history = vec![current];
    let mut max_ortho = p.orthonormality_error();
    let mut line_search_failed = false;
    let mut converged_by = ConvergedBy::MaxIters;
    let mut grad_norm = f64::NAN;
    let mut grad_is_current = false;

    for _ in 0..cfg.max_iters {
        let rgrad = project_tangent(&p, &cost.euclidean_gradient(p.matrix()))?;
        grad_norm = rgrad.norm();
        grad_is_current = true;
        if !grad_norm.is_finite() {
            return Err(Error::numerical("gradient is not finite"));
        }
        if grad_norm <= cfg.grad_tol {
            converged_by = ConvergedBy::Gradient;
            break;
        }

        let sq = grad_norm * grad_norm;
        let mut step = cfg.armijo_initial_step;
        let mut accepted = None;
        for _ in 0..cfg.armijo_max_backtracks {
            let candidate = retract_qr(&p, &(&rgrad * -step))?;
            let c = cost.cost(candidate.matrix());
            if c.is_finite() && c <= current - cfg.armijo_slope * step * sq {
                accepted = Some((candidate, c));
                break;
            }
            step *= cfg.armijo_shrink;
        }
        let Some((next, next_cost)) = accepted else {
            line_search_failed = true;
            converged_by = ConvergedBy::RelativeCost;
            break;
        };

        let ortho = next.orthonormality_error();
        debug_assert!(ortho <= ORTHONORMALITY_TOL, "retraction left the manifold: {ortho:e}");
        debug_assert!(next_cost <= current, "cost increased: {current} -> {next_cost}");
        max_ortho = max_ortho.max(ortho);

        let previous = current;
        p = next;
        current = next_cost;
        history.push(current);
        grad_is_current = false;
        if (current - previous).abs() <= cfg.rel_cost_tol * previous.abs().max(1.0) {
            converged_by = ConvergedBy::RelativeCost;
            break;
        }
    }

    if !grad_is_current {
        grad_norm = project_tangent(&p, &cost.euclidean_gradient(p.matrix()))?.norm();
    }

    let trace = DescentTrace {
        iterates_count: history.len() - 1,
        cost_history: history,
        final_grad_norm: grad_norm,
        converged_by,
        line_search_failed,
        max_orthonormality_error: max_ortho,
    };
    Ok((p, trace))
}
