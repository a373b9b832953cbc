//! Undirected weighted graphs with dense adjacency storage.
//!
//! Every graph in the crate is held as a symmetric `n × n` matrix. Self-loops
//! are allowed (template models use them to carry intra-community mass), but
//! graphs produced by the generators and loaders have an all-zero diagonal.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Undirected weighted graph. The adjacency matrix is exactly symmetric.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    adjacency: DMatrix<f64>,
}

/// Diagonal of the weighted degree matrix, `d_ii = Σ_j a_ij`.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeMatrix {
    pub diagonal: DVector<f64>,
}

/// Combinatorial Laplacian `L = D - A`.
#[derive(Debug, Clone, PartialEq)]
pub struct Laplacian {
    pub matrix: DMatrix<f64>,
}

/// Builds a graph on `n` vertices from an edge list.
///
/// `(i, j, w)` and `(j, i, w)` name the same undirected edge; repeated
/// entries accumulate, so `[(0, 1, 1.0), (1, 0, 1.0)]` yields weight 2.
pub fn build_graph(n: usize, edges: &[(usize, usize, f64)]) -> Result<Graph> {
    if n == 0 {
        return Err(Error::input("graph must have at least one vertex"));
    }
    let mut adjacency = DMatrix::zeros(n, n);
    for &(i, j, w) in edges {
        if i >= n || j >= n {
            return Err(Error::input(format!(
                "edge ({i}, {j}) references a vertex outside 0..{n}"
            )));
        }
        if !w.is_finite() {
            return Err(Error::input(format!("edge ({i}, {j}) has non-finite weight {w}")));
        }
        adjacency[(i, j)] += w;
        if i != j {
            adjacency[(j, i)] += w;
        }
    }
    Ok(Graph { adjacency })
}

impl Graph {
    /// Wraps an existing adjacency matrix; it must be square, finite and exactly symmetric.
    pub fn from_adjacency(adjacency: DMatrix<f64>) -> Result<Self> {
        let (r, c) = adjacency.shape();
        if r != c {
            return Err(Error::input(format!("adjacency must be square, got {r}x{c}")));
        }
        if r == 0 {
            return Err(Error::input("graph must have at least one vertex"));
        }
        for i in 0..r {
            for j in 0..=i {
                let (a, b) = (adjacency[(i, j)], adjacency[(j, i)]);
                if !a.is_finite() {
                    return Err(Error::input(format!("non-finite weight at ({i}, {j})")));
                }
                if a != b {
                    return Err(Error::input(format!(
                        "adjacency is not symmetric at ({i}, {j}): {a} vs {b}"
                    )));
                }
            }
        }
        Ok(Graph { adjacency })
    }

    pub fn n(&self) -> usize {
        self.adjacency.nrows()
    }

    pub fn adjacency(&self) -> &DMatrix<f64> {
        &self.adjacency
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.adjacency[(i, j)]
    }

    pub fn has_self_loops(&self) -> bool {
        (0..self.n()).any(|i| self.adjacency[(i, i)] != 0.0)
    }

    /// Total edge weight `Σ_{i<j} a_ij` plus self-loop weights.
    pub fn total_weight(&self) -> f64 {
        let n = self.n();
        let mut total = 0.0;
        for j in 0..n {
            for i in 0..=j {
                total += self.adjacency[(i, j)];
            }
        }
        total
    }

    /// Number of nonzero entries in the upper triangle (diagonal included).
    pub fn edge_count(&self) -> usize {
        let n = self.n();
        let mut count = 0;
        for j in 0..n {
            for i in 0..=j {
                if self.adjacency[(i, j)] != 0.0 {
                    count += 1;
                }
            }
        }
        count
    }

    /// Neighbour lists `(j, a_ij)` for `j != i` with nonzero weight, in ascending `j`.
    pub fn neighbor_lists(&self) -> Vec<Vec<(usize, f64)>> {
        let n = self.n();
        (0..n)
            .map(|i| {
                (0..n)
                    .filter(|&j| j != i && self.adjacency[(i, j)] != 0.0)
                    .map(|j| (j, self.adjacency[(i, j)]))
                    .collect()
            })
            .collect()
    }

    /// Sorted `(u, v, w)` triples with `u <= v` for every nonzero entry.
    pub fn edges(&self) -> Vec<(usize, usize, f64)> {
        let n = self.n();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i..n {
                let w = self.adjacency[(i, j)];
                if w != 0.0 {
                    out.push((i, j, w));
                }
            }
        }
        out
    }
}

/// Weighted degrees. A self-loop of weight `w` contributes `w` once.
pub fn degree_matrix(g: &Graph) -> DegreeMatrix {
    let n = g.n();
    let diagonal = DVector::from_fn(n, |i, _| g.adjacency.row(i).sum());
    DegreeMatrix { diagonal }
}

pub fn laplacian(g: &Graph) -> Laplacian {
    let d = degree_matrix(g);
    let matrix = DMatrix::from_diagonal(&d.diagonal) - &g.adjacency;
    Laplacian { matrix }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> Graph {
        build_graph(3, &[(0, 1, 1.0), (1, 2, 1.0)]).unwrap()
    }

    #[test]
    fn empty_graph_is_zero() {
        let g = build_graph(3, &[]).unwrap();
        assert_eq!(g.adjacency(), &DMatrix::zeros(3, 3));
        assert_eq!(degree_matrix(&g).diagonal.as_slice(), &[0.0, 0.0, 0.0]);
    }

    #[test]
    fn single_edge_is_symmetric() {
        let g = build_graph(2, &[(0, 1, 1.0)]).unwrap();
        assert_eq!(g.adjacency(), &DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]));
    }

    #[test]
    fn duplicate_edges_accumulate() {
        let edges = [(0, 1, 1.0), (1, 0, 1.0)];
        let g = build_graph(2, &edges).unwrap();
        // scalar accumulation oracle
        let mut acc = 0.0;
        for &(i, j, w) in &edges {
            if (i, j) == (0, 1) || (i, j) == (1, 0) {
                acc += w;
            }
        }
        assert_eq!(acc, 2.0);
        assert_eq!(g.weight(0, 1), acc);
        assert_eq!(g.weight(1, 0), acc);
    }

    #[test]
    fn rejects_bad_ids_and_empty() {
        assert!(matches!(build_graph(2, &[(0, 2, 1.0)]), Err(Error::Input(_))));
        assert!(matches!(build_graph(0, &[]), Err(Error::Input(_))));
    }

    #[test]
    fn from_adjacency_checks_symmetry() {
        let m = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.5, 0.0]);
        assert!(Graph::from_adjacency(m).is_err());
        let m = DMatrix::from_row_slice(2, 3, &[0.0; 6]);
        assert!(Graph::from_adjacency(m).is_err());
    }

    #[test]
    fn degrees() {
        let k2 = build_graph(2, &[(0, 1, 1.0)]).unwrap();
        assert_eq!(degree_matrix(&k2).diagonal.as_slice(), &[1.0, 1.0]);
        assert_eq!(degree_matrix(&path3()).diagonal.as_slice(), &[1.0, 2.0, 1.0]);
    }

    #[test]
    fn self_loop_counted_once_in_degree() {
        let g = build_graph(2, &[(0, 0, 3.0), (0, 1, 1.0)]).unwrap();
        assert_eq!(degree_matrix(&g).diagonal.as_slice(), &[4.0, 1.0]);
    }

    #[test]
    fn laplacians() {
        let zero = build_graph(2, &[]).unwrap();
        assert_eq!(laplacian(&zero).matrix, DMatrix::zeros(2, 2));
        let k2 = build_graph(2, &[(0, 1, 1.0)]).unwrap();
        assert_eq!(
            laplacian(&k2).matrix,
            DMatrix::from_row_slice(2, 2, &[1.0, -1.0, -1.0, 1.0])
        );
        let expected = DMatrix::from_row_slice(
            3,
            3,
            &[1.0, -1.0, 0.0, -1.0, 2.0, -1.0, 0.0, -1.0, 1.0],
        );
        assert_eq!(laplacian(&path3()).matrix, expected);
    }
}
