//! Two-phase Louvain modularity optimisation.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::baselines::modularity::{check_simple, modularity};
use crate::error::Result;
use crate::graph::Graph;
use crate::partition::Partition;

/// Passes stop once aggregation improves modularity by less than this.
pub const MIN_PASS_GAIN: f64 = 1e-9;

/// Weighted graph used between aggregation levels. `self_loops[i]` holds the
/// internal weight of super-node `i` counted over ordered pairs, so that
/// `degree[i] = Σ_j w_ij + self_loops[i]` and the degrees sum to `2m`.
struct Level {
    adj: Vec<Vec<(usize, f64)>>,
    self_loops: Vec<f64>,
    degree: Vec<f64>,
}

impl Level {
    fn from_graph(g: &Graph) -> Self {
        let adj = g.neighbor_lists();
        let degree = adj.iter().map(|row| row.iter().map(|(_, w)| w).sum()).collect();
        Level {
            self_loops: vec![0.0; adj.len()],
            adj,
            degree,
        }
    }

    fn len(&self) -> usize {
        self.adj.len()
    }

    /// Moves single nodes between neighbouring communities until no move
    /// increases modularity. Returns the community of each node and whether
    /// anything moved.
    fn local_moves<R: Rng + ?Sized>(&self, two_m: f64, rng: &mut R) -> (Vec<usize>, bool) {
        let n = self.len();
        let mut comm: Vec<usize> = (0..n).collect();
        let mut tot = self.degree.clone();
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);

        let mut links = vec![0.0; n];
        let mut touched: Vec<usize> = Vec::new();
        let eps = 1e-12 * two_m;
        let mut any_move = false;
        loop {
            let mut moved = false;
            for &i in &order {
                let old = comm[i];
                let k_i = self.degree[i];
                for &(j, w) in &self.adj[i] {
                    let c = comm[j];
                    if links[c] == 0.0 {
                        touched.push(c);
                    }
                    links[c] += w;
                }
                tot[old] -= k_i;

                let gain = |c: usize, links: &[f64]| links[c] - tot[c] * k_i / two_m;
                let mut best = old;
                let mut best_gain = gain(old, &links);
                touched.sort_unstable();
                for &c in &touched {
                    let g = gain(c, &links);
                    if g > best_gain + eps {
                        best = c;
                        best_gain = g;
                    }
                }

                tot[best] += k_i;
                comm[i] = best;
                if best != old {
                    moved = true;
                }
                for &c in &touched {
                    links[c] = 0.0;
                }
                touched.clear();
            }
            if !moved {
                break;
            }
            any_move = true;
        }
        (comm, any_move)
    }

    /// Collapses each community into a super-node. `comm` must be contiguous.
    fn aggregate(&self, comm: &[usize], count: usize) -> Level {
        let mut rows: Vec<std::collections::BTreeMap<usize, f64>> = vec![Default::default(); count];
        let mut self_loops = vec![0.0; count];
        let mut degree = vec![0.0; count];
        for i in 0..self.len() {
            let ci = comm[i];
            self_loops[ci] += self.self_loops[i];
            degree[ci] += self.degree[i];
            for &(j, w) in &self.adj[i] {
                let cj = comm[j];
                if ci == cj {
                    self_loops[ci] += w;
                } else {
                    *rows[ci].entry(cj).or_default() += w;
                }
            }
        }
        Level {
            adj: rows.into_iter().map(|r| r.into_iter().collect()).collect(),
            self_loops,
            degree,
        }
    }
}

/// Louvain community detection. Node visit order in each local-moving phase
/// is shuffled with `rng`.
pub fn louvain_cluster<R: Rng + ?Sized>(g: &Graph, rng: &mut R) -> Result<Partition> {
    let two_m = check_simple(g, "Louvain clustering")?;
    let n = g.n();
    let mut membership: Vec<usize> = (0..n).collect();
    let mut level = Level::from_graph(g);
    let mut q = modularity(g, &membership)?;

    loop {
        let (comm, moved) = level.local_moves(two_m, rng);
        if !moved {
            break;
        }
        let canonical = Partition::from_labels(&comm);
        let next: Vec<usize> = membership.iter().map(|&m| canonical.labels()[m]).collect();
        let next_q = modularity(g, &next)?;
        if next_q < q {
            break;
        }
        let gain = next_q - q;
        membership = next;
        q = next_q;
        level = level.aggregate(canonical.labels(), canonical.k_found());
        if gain < MIN_PASS_GAIN {
            break;
        }
    }
    Ok(Partition::from_labels(&membership))
}
