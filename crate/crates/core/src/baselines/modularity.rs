use crate::error::{Error, Result};
use crate::graph::{degree_matrix, Graph};

pub(crate) fn check_simple(g: &Graph, what: &str) -> Result<f64> {
    if g.has_self_loops() {
        return Err(Error::input(format!("{what} requires a graph without self-loops")));
    }
    let two_m: f64 = g.adjacency().sum();
    if two_m <= 0.0 {
        return Err(Error::input(format!("{what} is undefined on a graph with no edges")));
    }
    Ok(two_m)
}

/// Newman modularity of a labelling,
/// `Q = 1/(2|E|) Σ_ij [a_ij − d_i d_j / (2|E|)] δ(c_i, c_j)`.
///
/// Accumulated per community as `Σ_c [in_c / 2|E| − (tot_c / 2|E|)²]`.
pub fn modularity(g: &Graph, labels: &[usize]) -> Result<f64> {
    if labels.len() != g.n() {
        return Err(Error::input(format!(
            "partition has {} labels for a graph with {} vertices",
            labels.len(),
            g.n()
        )));
    }
    let two_m = check_simple(g, "modularity")?;
    let k = labels.iter().copied().max().map_or(0, |m| m + 1);
    let degrees = degree_matrix(g).diagonal;
    let mut internal = vec![0.0; k];
    let mut total = vec![0.0; k];
    let a = g.adjacency();
    for j in 0..g.n() {
        total[labels[j]] += degrees[j];
        for i in 0..g.n() {
            if labels[i] == labels[j] {
                internal[labels[j]] += a[(i, j)];
            }
        }
    }
    Ok(internal
        .iter()
        .zip(&total)
        .map(|(inside, tot)| inside / two_m - (tot / two_m).powi(2))
        .sum())
}
