//! Clauset–Newman–Moore greedy agglomeration.
//!
//! Starts from singletons and repeatedly merges the adjacent pair of
//! communities with the largest modularity gain `ΔQ_ij = 2(e_ij − a_i a_j)`,
//! stopping when no pair has a positive gain. Equal gains resolve to the
//! lexicographically smallest `(i, j)`.

use std::collections::BTreeMap;

use crate::baselines::modularity::check_simple;
use crate::error::Result;
use crate::graph::{degree_matrix, Graph};
use crate::partition::Partition;

pub fn cnm_cluster(g: &Graph) -> Result<Partition> {
    let two_m = check_simple(g, "CNM clustering")?;
    let n = g.n();
    let mut a: Vec<f64> = degree_matrix(g).diagonal.iter().map(|d| d / two_m).collect();
    let mut rows: Vec<BTreeMap<usize, f64>> = vec![BTreeMap::new(); n];
    for (i, j, w) in g.edges() {
        let dq = 2.0 * (w / two_m - a[i] * a[j]);
        rows[i].insert(j, dq);
        rows[j].insert(i, dq);
    }
    let mut community: Vec<usize> = (0..n).collect();
    let mut alive = vec![true; n];

    loop {
        let mut best: Option<(f64, usize, usize)> = None;
        for i in (0..n).filter(|&i| alive[i]) {
            for (&j, &dq) in rows[i].range(i + 1..) {
                if best.is_none_or(|(b, _, _)| dq > b) {
                    best = Some((dq, i, j));
                }
            }
        }
        let Some((dq, i, j)) = best else { break };
        if dq <= 0.0 {
            break;
        }

        // Fold community j into i.
        let row_i = std::mem::take(&mut rows[i]);
        let row_j = std::mem::take(&mut rows[j]);
        let mut merged = BTreeMap::new();
        for (&k, &dq_ik) in &row_i {
            if k == j {
                continue;
            }
            let v = match row_j.get(&k) {
                Some(dq_jk) => dq_ik + dq_jk,
                None => dq_ik - 2.0 * a[j] * a[k],
            };
            merged.insert(k, v);
        }
        for (&k, &dq_jk) in &row_j {
            if k == i || row_i.contains_key(&k) {
                continue;
            }
            merged.insert(k, dq_jk - 2.0 * a[i] * a[k]);
        }
        for (&k, &v) in &merged {
            rows[k].remove(&j);
            rows[k].insert(i, v);
        }
        rows[i] = merged;
        alive[j] = false;
        a[i] += a[j];
        a[j] = 0.0;
        for c in community.iter_mut() {
            if *c == j {
                *c = i;
            }
        }
    }
    Ok(Partition::from_labels(&community))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::baselines::modularity::modularity;
    use crate::graph::build_graph;

    #[test]
    fn two_triangles() {
        let g = build_graph(6, &[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0), (3, 4, 1.0), (4, 5, 1.0), (3, 5, 1.0)]).unwrap();
        let p = cnm_cluster(&g).unwrap();
        assert_eq!(p.labels(), &[0, 0, 0, 1, 1, 1]);
        assert!((modularity(&g, p.labels()).unwrap() - 0.5).abs() <= 1e-12);
    }

    #[test]
    fn single_edge_never_lowers_modularity() {
        let g = build_graph(2, &[(0, 1, 1.0)]).unwrap();
        let p = cnm_cluster(&g).unwrap();
        let singletons = modularity(&g, &[0, 1]).unwrap();
        assert!(modularity(&g, p.labels()).unwrap() >= singletons);
    }

    #[test]
    fn rejects_empty_graph() {
        assert!(cnm_cluster(&build_graph(3, &[]).unwrap()).is_err());
    }
}
