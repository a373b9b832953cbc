//! Planted-partition benchmark graphs and their expected-value templates.
//!
//! Four families are provided:
//!
//! * `G3`: three communities in a line.
//! * `G6`: six communities on an automorphism-free topology (see [`G6_TOPOLOGY`]).
//! * `C2`: four communities in a line with a tunable link between the two central ones.
//! * `BP`: two communities, either bipartite or hub-shaped.
//!
//! Intra-community rates are the complement of the incident inter-community
//! rates, `R_jj = 1 − Σ_{k≠j} R_jk`, except for `BP` whose intra rates are fixed.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::GroundTruth;
use crate::template::TemplateModel;

/// Inter-community rate on every template edge of G3, G6 and C2's outer links.
pub const BASE_INTER: f64 = 0.1;

/// Community adjacency for G6: a path `0–1–2–3–4` with community 5 joined to
/// both 1 and 2. The only automorphism of this graph is the identity.
pub const G6_TOPOLOGY: [(usize, usize); 6] = [(0, 1), (1, 2), (2, 3), (3, 4), (1, 5), (2, 5)];

/// Community sizes and a symmetric matrix of connection probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct CommunitySpec {
    sizes: Vec<usize>,
    rates: DMatrix<f64>,
}

impl CommunitySpec {
    pub fn new(sizes: Vec<usize>, rates: DMatrix<f64>) -> Result<Self> {
        let k = sizes.len();
        if k == 0 {
            return Err(Error::input("a community spec needs at least one community"));
        }
        if rates.shape() != (k, k) {
            return Err(Error::input(format!("rates must be {k}x{k}, got {:?}", rates.shape())));
        }
        if sizes.contains(&0) {
            return Err(Error::input("community sizes must be at least 1"));
        }
        for i in 0..k {
            for j in 0..k {
                let r = rates[(i, j)];
                if !(0.0..=1.0).contains(&r) {
                    return Err(Error::input(format!("rate R[{i},{j}] = {r} is not a probability")));
                }
                if r != rates[(j, i)] {
                    return Err(Error::input("rates must be symmetric"));
                }
            }
        }
        Ok(CommunitySpec { sizes, rates })
    }

    pub fn k(&self) -> usize {
        self.sizes.len()
    }

    pub fn n(&self) -> usize {
        self.sizes.iter().sum()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn rates(&self) -> &DMatrix<f64> {
        &self.rates
    }

    pub fn ground_truth(&self) -> GroundTruth {
        GroundTruth::from_sizes(&self.sizes).expect("sizes are validated nonzero")
    }
}

/// Samples an unweighted simple graph: every unordered pair `i < j` is joined
/// independently with probability `R[c_i, c_j]`. Vertices are laid out in
/// contiguous blocks by community.
pub fn sample_graph<R: Rng + ?Sized>(spec: &CommunitySpec, rng: &mut R) -> (Graph, GroundTruth) {
    let truth = spec.ground_truth();
    let labels = truth.labels();
    let n = spec.n();
    let mut a = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let p = spec.rates[(labels[i], labels[j])];
            if rng.random::<f64>() < p {
                a[(i, j)] = 1.0;
                a[(j, i)] = 1.0;
            }
        }
    }
    let g = Graph::from_adjacency(a).expect("sampled adjacency is symmetric");
    (g, truth)
}

/// Expected-value template: `a_jj = 2·R_jj·s_j` and `a_jk = R_jk·(s_j + s_k)`.
pub fn expected_model(spec: &CommunitySpec) -> TemplateModel {
    let k = spec.k();
    let s = &spec.sizes;
    let weights = DMatrix::from_fn(k, k, |j, l| {
        if j == l {
            2.0 * spec.rates[(j, j)] * s[j] as f64
        } else {
            spec.rates[(j, l)] * (s[j] + s[l]) as f64
        }
    });
    TemplateModel::new(weights).expect("expected model is symmetric and finite")
}

/// Rates from a community-level topology: `inter` on each listed edge and the
/// complement `1 − Σ inter` on the diagonal.
fn complement_rates(k: usize, links: &[(usize, usize, f64)]) -> DMatrix<f64> {
    let mut r = DMatrix::zeros(k, k);
    for &(a, b, p) in links {
        r[(a, b)] = p;
        r[(b, a)] = p;
    }
    for j in 0..k {
        let incident: f64 = (0..k).filter(|&l| l != j).map(|l| r[(j, l)]).sum();
        r[(j, j)] = (1.0 - incident).max(0.0);
    }
    r
}

pub fn make_g3(size: usize) -> Result<CommunitySpec> {
    let rates = complement_rates(3, &[(0, 1, BASE_INTER), (1, 2, BASE_INTER)]);
    CommunitySpec::new(vec![size; 3], rates)
}

pub fn make_g6(size: usize) -> Result<CommunitySpec> {
    let links: Vec<_> = G6_TOPOLOGY.iter().map(|&(a, b)| (a, b, BASE_INTER)).collect();
    CommunitySpec::new(vec![size; 6], complement_rates(6, &links))
}

/// Four communities in a line `0–1–2–3`; `central_inter` links the central pair.
pub fn make_c2(size: usize, central_inter: f64) -> Result<CommunitySpec> {
    if !(0.0..=1.0 - BASE_INTER).contains(&central_inter) {
        return Err(Error::input(format!(
            "central inter-connection probability must lie in [0, {}], got {central_inter}",
            1.0 - BASE_INTER
        )));
    }
    let rates = complement_rates(4, &[(0, 1, BASE_INTER), (1, 2, central_inter), (2, 3, BASE_INTER)]);
    CommunitySpec::new(vec![size; 4], rates)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IntraMode {
    /// No intra-community edges on either side.
    Bipartite,
    /// Community 0 has no internal edges, community 1 has rate [`HUB_INTRA`].
    Hub,
}

pub const HUB_INTRA: f64 = 0.5;

impl IntraMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            IntraMode::Bipartite => "bipartite",
            IntraMode::Hub => "hub",
        }
    }
}

impl std::str::FromStr for IntraMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bipartite" => Ok(IntraMode::Bipartite),
            "hub" => Ok(IntraMode::Hub),
            other => Err(Error::input(format!("unknown intra mode `{other}` (expected bipartite or hub)"))),
        }
    }
}

pub fn make_bp(size: usize, inter: f64, intra_mode: IntraMode) -> Result<CommunitySpec> {
    let second = match intra_mode {
        IntraMode::Bipartite => 0.0,
        IntraMode::Hub => HUB_INTRA,
    };
    let rates = DMatrix::from_row_slice(2, 2, &[0.0, inter, inter, second]);
    CommunitySpec::new(vec![size; 2], rates)
}

/// Adds symmetric zero-mean Gaussian noise with standard deviation `sigma`
/// to every template weight. Negative results are kept.
pub fn add_model_noise<R: Rng + ?Sized>(model: &TemplateModel, sigma: f64, rng: &mut R) -> Result<TemplateModel> {
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(Error::input(format!("noise sigma must be a finite nonnegative number, got {sigma}")));
    }
    if sigma == 0.0 {
        return Ok(model.clone());
    }
    let mut w = model.weights().clone();
    let normal = Normal::new(0.0, sigma).map_err(|e| Error::input(e.to_string()))?;
    let k = model.k();
    for i in 0..k {
        for j in i..k {
            let v = w[(i, j)] + normal.sample(rng);
            w[(i, j)] = v;
            w[(j, i)] = v;
        }
    }
    TemplateModel::new(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// All permutations of `0..n` (Heap's algorithm).
    fn permutations(n: usize) -> Vec<Vec<usize>> {
        fn heap(k: usize, a: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if k <= 1 {
                out.push(a.clone());
                return;
            }
            for i in 0..k {
                heap(k - 1, a, out);
                let swap = if k.is_multiple_of(2) { i } else { 0 };
                a.swap(swap, k - 1);
            }
        }
        let mut a: Vec<usize> = (0..n).collect();
        let mut out = Vec::new();
        heap(n, &mut a, &mut out);
        out
    }

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    #[test]
    fn extreme_rates() {
        let zero = CommunitySpec::new(vec![3, 3], DMatrix::zeros(2, 2)).unwrap();
        let (g, _) = sample_graph(&zero, &mut rng(0));
        assert_eq!(g.edge_count(), 0);
        let one = CommunitySpec::new(vec![3, 3], DMatrix::from_element(2, 2, 1.0)).unwrap();
        let (g, truth) = sample_graph(&one, &mut rng(0));
        assert_eq!(g.edge_count(), 15);
        assert!(!g.has_self_loops());
        assert_eq!(truth.labels(), &[0, 0, 0, 1, 1, 1]);
    }

    #[test]
    fn mean_edge_count_matches_binomial_expectation() {
        let spec = CommunitySpec::new(vec![10], DMatrix::from_element(1, 1, 0.8)).unwrap();
        let mut r = rng(42);
        let draws = 10_000;
        let total: usize = (0..draws).map(|_| sample_graph(&spec, &mut r).0.edge_count()).sum();
        let mean = total as f64 / draws as f64;
        // 3σ of the sample mean: sqrt(45 · 0.8 · 0.2 / 10_000)
        let tol = 3.0 * (45.0 * 0.8 * 0.2 / draws as f64).sqrt();
        assert!((mean - 36.0).abs() <= tol, "mean {mean}");
    }

    #[test]
    fn block_densities_converge_to_rates() {
        let spec = make_c2(12, 0.3).unwrap();
        let mut r = rng(7);
        let draws = 400;
        let k = spec.k();
        let mut hits = DMatrix::<f64>::zeros(k, k);
        let labels = spec.ground_truth().labels().to_vec();
        for _ in 0..draws {
            let (g, _) = sample_graph(&spec, &mut r);
            for (i, j, _) in g.edges() {
                let (a, b) = (labels[i].min(labels[j]), labels[i].max(labels[j]));
                hits[(a, b)] += 1.0;
            }
        }
        for a in 0..k {
            for b in a..k {
                let pairs = if a == b { 12.0 * 11.0 / 2.0 } else { 144.0 } * draws as f64;
                let p = spec.rates()[(a, b)];
                let density = hits[(a, b)] / pairs;
                let sd = (p * (1.0 - p) / pairs).sqrt();
                assert!((density - p).abs() <= 3.0 * sd + 1e-12, "block ({a},{b}): {density} vs {p}");
            }
        }
    }

    #[test]
    fn expected_model_formulas() {
        assert_eq!(expected_model(&CommunitySpec::new(vec![2, 2], DMatrix::zeros(2, 2)).unwrap()).weights(), &DMatrix::zeros(2, 2));
        let spec = CommunitySpec::new(vec![4, 4], DMatrix::from_row_slice(2, 2, &[0.9, 0.1, 0.1, 0.9])).unwrap();
        let m = expected_model(&spec);
        let expected = DMatrix::from_row_slice(2, 2, &[7.2, 0.8, 0.8, 7.2]);
        assert!((m.weights() - expected).norm() <= 1e-12);
        let single = CommunitySpec::new(vec![10], DMatrix::from_element(1, 1, 0.5)).unwrap();
        assert_eq!(expected_model(&single).weights()[(0, 0)], 10.0);
    }

    #[test]
    fn g3_spec() {
        let s = make_g3(5).unwrap();
        assert_eq!(s.n(), 15);
        let r = s.rates();
        assert!((r[(0, 0)] - 0.9).abs() < 1e-12 && (r[(1, 1)] - 0.8).abs() < 1e-12 && (r[(2, 2)] - 0.9).abs() < 1e-12);
        assert_eq!((r[(0, 1)], r[(1, 2)], r[(0, 2)]), (0.1, 0.1, 0.0));
        assert!(make_g3(1).is_ok());
        let m = expected_model(&make_g3(10).unwrap());
        let diag: Vec<f64> = (0..3).map(|j| m.weights()[(j, j)]).collect();
        for (got, want) in diag.iter().zip([18.0, 16.0, 18.0]) {
            assert!((got - want).abs() <= 1e-12);
        }
    }

    #[test]
    fn g6_template_has_no_automorphisms() {
        let spec = make_g6(5).unwrap();
        assert_eq!(spec.n(), 30);
        let m = expected_model(&spec);
        let w = m.weights();
        let autos = permutations(6)
            .into_iter()
            .filter(|p| (0..6).all(|i| (0..6).all(|j| w[(p[i], p[j])] == w[(i, j)])))
            .count();
        assert_eq!(autos, 1);
        // community 3 has two neighbours
        assert!((spec.rates()[(3, 3)] - 0.8).abs() <= 1e-12);
        let unweighted: Vec<Vec<bool>> = (0..6).map(|i| (0..6).map(|j| i != j && w[(i, j)] != 0.0).collect()).collect();
        let graph_autos = permutations(6)
            .into_iter()
            .filter(|p| (0..6).all(|i| (0..6).all(|j| unweighted[p[i]][p[j]] == unweighted[i][j])))
            .count();
        assert_eq!(graph_autos, 1);
    }

    #[test]
    fn c2_spec() {
        let r = make_c2(10, 0.42).unwrap();
        assert!((r.rates()[(1, 1)] - 0.48).abs() <= 1e-12);
        assert!((r.rates()[(0, 0)] - 0.9).abs() <= 1e-12);
        let r = make_c2(10, 0.5).unwrap();
        assert!((r.rates()[(2, 2)] - 0.4).abs() <= 1e-12);
        let r = make_c2(10, 0.9).unwrap();
        assert!(r.rates()[(1, 1)].abs() <= 1e-12);
        assert!(make_c2(10, 0.95).is_err());
    }

    #[test]
    fn bp_specs() {
        let s = make_bp(4, 1.0, IntraMode::Bipartite).unwrap();
        let (g, _) = sample_graph(&s, &mut rng(3));
        assert_eq!(g.edge_count(), 16);
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(g.weight(i, j), 0.0);
                assert_eq!(g.weight(i, j + 4), 1.0);
            }
        }
        let hub = make_bp(10, 0.6, IntraMode::Hub).unwrap();
        assert_eq!(hub.rates(), &DMatrix::from_row_slice(2, 2, &[0.0, 0.6, 0.6, 0.5]));
        let m = expected_model(&make_bp(10, 0.6, IntraMode::Bipartite).unwrap());
        assert!((m.weights() - DMatrix::from_row_slice(2, 2, &[0.0, 12.0, 12.0, 0.0])).norm() <= 1e-12);
    }

    #[test]
    fn noise_is_symmetric_and_zero_sigma_is_identity() {
        let m = expected_model(&make_g3(10).unwrap());
        assert_eq!(add_model_noise(&m, 0.0, &mut rng(0)).unwrap(), m);
        let noisy = add_model_noise(&m, 2.0, &mut rng(0)).unwrap();
        assert_eq!(noisy.weights(), &noisy.weights().transpose());
        assert!(add_model_noise(&m, -1.0, &mut rng(0)).is_err());
    }

    #[test]
    fn noise_standard_deviation() {
        let m = expected_model(&make_g3(10).unwrap());
        let sigma = 1.5;
        let mut r = rng(99);
        let mut samples = Vec::new();
        for _ in 0..10_000 {
            let noisy = add_model_noise(&m, sigma, &mut r).unwrap();
            for i in 0..3 {
                for j in i..3 {
                    samples.push(noisy.weights()[(i, j)] - m.weights()[(i, j)]);
                }
            }
        }
        let mean = samples.iter().sum::<f64>() / samples.len() as f64;
        let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (samples.len() - 1) as f64;
        assert!((var.sqrt() - sigma).abs() <= 0.05 * sigma);
    }
}
