//! Clustering evaluation: Adjusted Rand Index and projector distance.

use std::collections::HashMap;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::stiefel::StiefelPoint;

fn comb2(x: u64) -> f64 {
    (x * x.saturating_sub(1) / 2) as f64
}

/// Adjusted Rand Index from the pair-counting contingency table.
///
/// When the chance-corrected denominator vanishes (both labelings all
/// singletons, or both a single cluster) the index is 1 for identical
/// partitions and 0 otherwise.
pub fn adjusted_rand_index(a: &[usize], b: &[usize]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::input(format!(
            "partitions have different lengths ({} vs {})",
            a.len(),
            b.len()
        )));
    }
    let n = a.len() as u64;
    if n < 2 {
        return Err(Error::input("ARI needs at least two items"));
    }
    let mut table: HashMap<(usize, usize), u64> = HashMap::new();
    let mut rows: HashMap<usize, u64> = HashMap::new();
    let mut cols: HashMap<usize, u64> = HashMap::new();
    for (&x, &y) in a.iter().zip(b) {
        *table.entry((x, y)).or_default() += 1;
        *rows.entry(x).or_default() += 1;
        *cols.entry(y).or_default() += 1;
    }
    let index: f64 = table.values().map(|&c| comb2(c)).sum();
    let sum_a: f64 = rows.values().map(|&c| comb2(c)).sum();
    let sum_b: f64 = cols.values().map(|&c| comb2(c)).sum();
    let expected = sum_a * sum_b / comb2(n);
    let max = 0.5 * (sum_a + sum_b);
    let denom = max - expected;
    if denom == 0.0 {
        let same = Partition::from_labels(a) == Partition::from_labels(b);
        return Ok(if same { 1.0 } else { 0.0 });
    }
    Ok((index - expected) / denom)
}

/// Binary `n × k` indicator with `b[i, labels[i]] = 1`.
pub fn indicator_matrix(labels: &[usize], k: usize) -> Result<DMatrix<f64>> {
    let mut b = DMatrix::zeros(labels.len(), k);
    for (i, &l) in labels.iter().enumerate() {
        if l >= k {
            return Err(Error::input(format!("label {l} of vertex {i} is outside 0..{k}")));
        }
        b[(i, l)] = 1.0;
    }
    Ok(b)
}

/// Nearest matrix with orthonormal columns to a binary indicator, `U Vᵀ`
/// from the thin SVD `B = U Σ Vᵀ`. For an indicator this is `B` with
/// column `j` divided by `√s_j`.
pub fn closest_orthonormal(b: &DMatrix<f64>) -> Result<StiefelPoint> {
    let (n, k) = b.shape();
    if k == 0 || n < k {
        return Err(Error::input(format!("indicator must be n x k with n >= k >= 1, got {n}x{k}")));
    }
    for i in 0..n {
        let row = b.row(i);
        let ones = row.iter().filter(|&&v| v == 1.0).count();
        let zeros = row.iter().filter(|&&v| v == 0.0).count();
        if ones != 1 || zeros != k - 1 {
            return Err(Error::input(format!("row {i} of the indicator must hold exactly one 1")));
        }
    }
    if let Some(j) = (0..k).find(|&j| b.column(j).sum() == 0.0) {
        return Err(Error::input(format!("indicator column {j} is empty")));
    }
    let svd = b.clone().svd(true, true);
    let u = svd.u.ok_or_else(|| Error::numerical("SVD did not return U"))?;
    let v_t = svd.v_t.ok_or_else(|| Error::numerical("SVD did not return Vᵀ"))?;
    StiefelPoint::new(u * v_t)
}

/// `‖P Pᵀ − P* P*ᵀ‖²_F`, evaluated as `‖PᵀP‖² + ‖P*ᵀP*‖² − 2‖PᵀP*‖²` so no
/// `n × n` matrix is formed.
pub fn projector_distance(p: &StiefelPoint, p_star: &StiefelPoint) -> Result<f64> {
    if p.n() != p_star.n() {
        return Err(Error::input(format!(
            "embeddings have different row counts ({} vs {})",
            p.n(),
            p_star.n()
        )));
    }
    let (a, b) = (p.matrix(), p_star.matrix());
    let aa = (a.transpose() * a).norm_squared();
    let bb = (b.transpose() * b).norm_squared();
    let ab = (a.transpose() * b).norm_squared();
    Ok((aa + bb - 2.0 * ab).max(0.0))
}
