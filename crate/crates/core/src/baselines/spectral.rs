use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{laplacian, Graph};
use crate::kmeans::{kmeans, KMeansConfig};
use crate::partition::Partition;
use crate::stiefel::StiefelPoint;

#[derive(Debug, Clone)]
pub struct SpectralResult {
    pub partition: Partition,
    /// Eigenvectors of the `k` smallest Laplacian eigenvalues, as columns.
    pub embedding: StiefelPoint,
    pub eigenvalues: Vec<f64>,
}

/// Eigenvectors of `L = D − A` for the `k` smallest eigenvalues, ascending.
/// Each vector's sign is fixed so its largest-magnitude entry is positive.
pub fn laplacian_embedding(g: &Graph, k: usize) -> Result<(DMatrix<f64>, Vec<f64>)> {
    let n = g.n();
    if k == 0 || n < k {
        return Err(Error::input(format!("spectral embedding needs n >= k >= 1, got n={n}, k={k}")));
    }
    if g.has_self_loops() {
        return Err(Error::input("spectral clustering requires a graph without self-loops"));
    }
    let eig = SymmetricEigen::new(laplacian(g).matrix);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]).then(a.cmp(&b)));

    let mut vectors = DMatrix::zeros(n, k);
    let mut values = Vec::with_capacity(k);
    for (col, &idx) in order.iter().take(k).enumerate() {
        let v = eig.eigenvectors.column(idx);
        let pivot = v.iter().enumerate().fold(0, |best, (i, x)| if x.abs() > v[best].abs() { i } else { best });
        let sign = if v[pivot] < 0.0 { -1.0 } else { 1.0 };
        vectors.set_column(col, &(v * sign));
        values.push(eig.eigenvalues[idx]);
    }
    Ok((vectors, values))
}

/// Unnormalised spectral clustering: k-means on the rows of the Laplacian embedding.
pub fn spectral_cluster<R: Rng + ?Sized>(
    g: &Graph,
    k: usize,
    kmeans_cfg: &KMeansConfig,
    rng: &mut R,
) -> Result<SpectralResult> {
    let (vectors, eigenvalues) = laplacian_embedding(g, k)?;
    let km = kmeans(&vectors, k, kmeans_cfg, rng)?;
    Ok(SpectralResult {
        partition: Partition::from_labels(&km.labels),
        embedding: StiefelPoint::new(vectors)?,
        eigenvalues,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;
    use crate::metrics::adjusted_rand_index;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn two_triangles() -> Graph {
        build_graph(6, &[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0), (3, 4, 1.0), (4, 5, 1.0), (3, 5, 1.0)]).unwrap()
    }

    #[test]
    fn two_triangles_split() {
        let g = two_triangles();
        let res = spectral_cluster(&g, 2, &KMeansConfig::default(), &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
        assert!(res.eigenvalues.iter().all(|v| v.abs() <= 1e-12));
        let ari = adjusted_rand_index(res.partition.labels(), &[0, 0, 0, 1, 1, 1]).unwrap();
        assert_eq!(ari, 1.0);
    }

    #[test]
    fn complete_graph_one_cluster() {
        let edges: Vec<_> = (0..4).flat_map(|i| (i + 1..4).map(move |j| (i, j, 1.0))).collect();
        let g = build_graph(4, &edges).unwrap();
        let res = spectral_cluster(&g, 1, &KMeansConfig::default(), &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
        assert_eq!(res.partition.k_found(), 1);
    }

    #[test]
    fn deterministic_and_sign_fixed() {
        let g = build_graph(5, &[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (3, 4, 1.0)]).unwrap();
        let (v, vals) = laplacian_embedding(&g, 3).unwrap();
        assert!(vals.windows(2).all(|w| w[0] <= w[1]));
        for c in 0..3 {
            let col = v.column(c);
            let max = col.iter().cloned().fold(0.0f64, |a, x| if x.abs() > a.abs() { x } else { a });
            assert!(max > 0.0);
        }
        let a = spectral_cluster(&g, 2, &KMeansConfig::default(), &mut ChaCha8Rng::seed_from_u64(4)).unwrap();
        let b = spectral_cluster(&g, 2, &KMeansConfig::default(), &mut ChaCha8Rng::seed_from_u64(4)).unwrap();
        assert_eq!(a.partition, b.partition);
    }

    #[test]
    fn rejects_too_many_clusters() {
        let g = build_graph(2, &[(0, 1, 1.0)]).unwrap();
        assert!(matches!(
            spectral_cluster(&g, 3, &KMeansConfig::default(), &mut ChaCha8Rng::seed_from_u64(0)),
            Err(Error::Input(_))
        ));
    }
}
