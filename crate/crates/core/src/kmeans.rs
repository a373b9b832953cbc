//! Lloyd's k-means with k-means++ seeding on the rows of a dense matrix.

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KMeansConfig {
    /// Independent seeded runs; the one with the lowest inertia wins.
    pub restarts: usize,
    pub max_iters: usize,
}

impl Default for KMeansConfig {
    fn default() -> Self {
        KMeansConfig {
            restarts: 10,
            max_iters: 300,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KMeansResult {
    /// Row `i` is assigned to centroid `labels[i]` in `0..k`.
    pub labels: Vec<usize>,
    /// Sum of squared Euclidean distances from each row to its centroid.
    pub inertia: f64,
    pub centroids: DMatrix<f64>,
}

fn sq_dist(points: &DMatrix<f64>, i: usize, centroids: &DMatrix<f64>, c: usize) -> f64 {
    (0..points.ncols())
        .map(|d| {
            let diff = points[(i, d)] - centroids[(c, d)];
            diff * diff
        })
        .sum()
}

/// Nearest centroid, ties broken by the lowest index.
fn nearest(points: &DMatrix<f64>, i: usize, centroids: &DMatrix<f64>) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for c in 0..centroids.nrows() {
        let d = sq_dist(points, i, centroids, c);
        if d < best.1 {
            best = (c, d);
        }
    }
    best
}

fn seed_plus_plus<R: Rng + ?Sized>(points: &DMatrix<f64>, k: usize, rng: &mut R) -> DMatrix<f64> {
    let (n, dim) = points.shape();
    let mut centroids = DMatrix::zeros(k, dim);
    let first = rng.random_range(0..n);
    centroids.row_mut(0).copy_from(&points.row(first));
    let mut d2: Vec<f64> = (0..n).map(|i| sq_dist(points, i, &centroids, 0)).collect();
    for c in 1..k {
        let total: f64 = d2.iter().sum();
        let pick = if total > 0.0 {
            let target = rng.random::<f64>() * total;
            let mut acc = 0.0;
            let mut chosen = n - 1;
            for (i, &w) in d2.iter().enumerate() {
                acc += w;
                if acc > target && w > 0.0 {
                    chosen = i;
                    break;
                }
            }
            chosen
        } else {
            // every point coincides with an existing centre
            rng.random_range(0..n)
        };
        centroids.row_mut(c).copy_from(&points.row(pick));
        for (i, d) in d2.iter_mut().enumerate() {
            *d = d.min(sq_dist(points, i, &centroids, c));
        }
    }
    centroids
}

/// One Lloyd run from k-means++ seeds. Returns the result and the inertia after
/// every assignment step.
pub(crate) fn lloyd<R: Rng + ?Sized>(
    points: &DMatrix<f64>,
    k: usize,
    max_iters: usize,
    rng: &mut R,
) -> (KMeansResult, Vec<f64>) {
    let (n, dim) = points.shape();
    let mut centroids = seed_plus_plus(points, k, rng);
    let mut labels = vec![usize::MAX; n];
    let mut dists = vec![0.0; n];
    let mut history = Vec::new();

    for _ in 0..max_iters.max(1) {
        let mut changed = false;
        for i in 0..n {
            let (c, d) = nearest(points, i, &centroids);
            if labels[i] != c {
                labels[i] = c;
                changed = true;
            }
            dists[i] = d;
        }
        history.push(dists.iter().sum());
        if !changed {
            break;
        }

        let mut sums = DMatrix::zeros(k, dim);
        let mut counts = vec![0usize; k];
        for i in 0..n {
            counts[labels[i]] += 1;
            let mut row = sums.row_mut(labels[i]);
            row += points.row(i);
        }
        for (c, &count) in counts.iter().enumerate() {
            if count > 0 {
                let mean = sums.row(c) / count as f64;
                centroids.row_mut(c).copy_from(&mean);
            }
        }
        // Empty clusters take the point farthest from its own centroid as a singleton.
        for c in 0..k {
            if counts[c] > 0 {
                continue;
            }
            let mut far = (usize::MAX, -1.0);
            for i in 0..n {
                if counts[labels[i]] <= 1 {
                    continue;
                }
                let d = sq_dist(points, i, &centroids, labels[i]);
                if d > far.1 {
                    far = (i, d);
                }
            }
            if far.0 == usize::MAX {
                break;
            }
            let i = far.0;
            counts[labels[i]] -= 1;
            counts[c] = 1;
            labels[i] = c;
            centroids.row_mut(c).copy_from(&points.row(i));
        }
    }

    let inertia = (0..n).map(|i| sq_dist(points, i, &centroids, labels[i])).sum();
    (
        KMeansResult {
            labels,
            inertia,
            centroids,
        },
        history,
    )
}

/// k-means on the rows of `points`, best of `cfg.restarts` seeded runs.
pub fn kmeans<R: Rng + ?Sized>(
    points: &DMatrix<f64>,
    k: usize,
    cfg: &KMeansConfig,
    rng: &mut R,
) -> Result<KMeansResult> {
    let n = points.nrows();
    if k == 0 || n < k {
        return Err(Error::input(format!("k-means needs n >= k >= 1, got n={n}, k={k}")));
    }
    if points.iter().any(|v| !v.is_finite()) {
        return Err(Error::numerical("k-means input contains non-finite values"));
    }
    let mut best: Option<KMeansResult> = None;
    for _ in 0..cfg.restarts.max(1) {
        let (run, _) = lloyd(points, k, cfg.max_iters, rng);
        if best.as_ref().is_none_or(|b| run.inertia < b.inertia) {
            best = Some(run);
        }
    }
    Ok(best.expect("at least one restart"))
}

/// Sum of squared distances from the rows to their mean, i.e. the one-cluster inertia.
pub fn total_sum_of_squares(points: &DMatrix<f64>) -> f64 {
    let n = points.nrows() as f64;
    let mean: DVector<f64> = points.row_sum().transpose() / n;
    (0..points.nrows())
        .map(|i| (points.row(i).transpose() - &mean).norm_squared())
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    #[test]
    fn single_cluster_inertia_is_total_sum_of_squares() {
        let pts = DMatrix::from_row_slice(4, 2, &[0.0, 0.0, 1.0, 0.0, 3.0, 1.0, -2.0, 5.0]);
        let res = kmeans(&pts, 1, &KMeansConfig::default(), &mut rng(0)).unwrap();
        assert!(res.labels.iter().all(|&l| l == 0));
        assert!((res.inertia - total_sum_of_squares(&pts)).abs() <= 1e-12);
    }

    #[test]
    fn separated_duplicates() {
        let pts = DMatrix::from_row_slice(6, 2, &[1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0]);
        let res = kmeans(&pts, 2, &KMeansConfig::default(), &mut rng(4)).unwrap();
        assert_eq!(res.inertia, 0.0);
        assert_eq!(res.labels[0], res.labels[1]);
        assert_eq!(res.labels[1], res.labels[2]);
        assert_eq!(res.labels[3], res.labels[4]);
        assert_ne!(res.labels[0], res.labels[3]);
    }

    /// Exhaustive search over all 2-partitions of a small point set.
    fn brute_force_two_means(pts: &DMatrix<f64>) -> f64 {
        let n = pts.nrows();
        let mut best = f64::INFINITY;
        for mask in 1u32..(1 << n) - 1 {
            let mut total = 0.0;
            for side in [true, false] {
                let rows: Vec<usize> = (0..n).filter(|&i| ((mask >> i) & 1 == 1) == side).collect();
                let sub = DMatrix::from_fn(rows.len(), pts.ncols(), |r, c| pts[(rows[r], c)]);
                total += total_sum_of_squares(&sub);
            }
            best = best.min(total);
        }
        best
    }

    #[test]
    fn unit_square_corners() {
        let pts = DMatrix::from_row_slice(4, 2, &[0.0, 0.0, 1.0, 0.0, 0.0, 1.0, 1.0, 1.0]);
        let oracle = brute_force_two_means(&pts);
        assert!((oracle - 1.0).abs() <= 1e-12);
        let res = kmeans(&pts, 2, &KMeansConfig::default(), &mut rng(9)).unwrap();
        assert!((res.inertia - oracle).abs() <= 1e-12);
    }

    #[test]
    fn rejects_too_few_points() {
        let pts = DMatrix::zeros(2, 2);
        assert!(matches!(kmeans(&pts, 3, &KMeansConfig::default(), &mut rng(0)), Err(Error::Input(_))));
    }

    #[test]
    fn every_cluster_is_used_even_with_duplicates() {
        let pts = DMatrix::from_row_slice(5, 1, &[0.0, 0.0, 0.0, 0.0, 1.0]);
        let res = kmeans(&pts, 3, &KMeansConfig::default(), &mut rng(1)).unwrap();
        let mut used = res.labels.clone();
        used.sort();
        used.dedup();
        assert_eq!(used.len(), 3);
    }

    proptest::proptest! {
        #[test]
        fn inertia_never_increases(seed in 0u64..5000, n in 3usize..30, k in 1usize..4) {
            let mut r = rng(seed);
            let pts = DMatrix::from_fn(n, 2, |_, _| r.random::<f64>());
            let (_, history) = lloyd(&pts, k.min(n), 300, &mut r);
            proptest::prop_assert!(history.windows(2).all(|w| w[1] <= w[0] + 1e-12));
        }

        #[test]
        fn labels_depend_only_on_points_and_seed(seed in 0u64..5000, n in 3usize..20) {
            let mut r = rng(seed ^ 0xfeed);
            let pts = DMatrix::from_fn(n, 3, |_, _| r.random::<f64>());
            let a = kmeans(&pts, 2, &KMeansConfig::default(), &mut rng(seed)).unwrap();
            let b = kmeans(&pts, 2, &KMeansConfig::default(), &mut rng(seed)).unwrap();
            proptest::prop_assert_eq!(a.labels, b.labels);
        }
    }
}
