use std::collections::HashMap;

use crate::error::{Error, Result};

/// A hard assignment of `n` vertices to clusters, labels canonicalised to
/// `0..k_found` in order of first appearance.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    labels: Vec<usize>,
    k_found: usize,
}

impl Partition {
    /// Relabels arbitrary ids to `0..k_found` by first appearance.
    pub fn from_labels<L: Copy + Eq + std::hash::Hash>(labels: &[L]) -> Self {
        let mut ids = HashMap::new();
        let labels = labels
            .iter()
            .map(|l| {
                let next = ids.len();
                *ids.entry(*l).or_insert(next)
            })
            .collect();
        Partition {
            labels,
            k_found: ids.len(),
        }
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn k_found(&self) -> usize {
        self.k_found
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k_found];
        for &l in &self.labels {
            sizes[l] += 1;
        }
        sizes
    }
}

/// Reference community assignment. Labels lie in `0..k` and every community is nonempty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundTruth {
    labels: Vec<usize>,
    sizes: Vec<usize>,
}

impl GroundTruth {
    pub fn new(labels: Vec<usize>, k: usize) -> Result<Self> {
        let mut sizes = vec![0; k];
        for (v, &l) in labels.iter().enumerate() {
            if l >= k {
                return Err(Error::input(format!("vertex {v} has label {l} outside 0..{k}")));
            }
            sizes[l] += 1;
        }
        if let Some(j) = sizes.iter().position(|&s| s == 0) {
            return Err(Error::input(format!("community {j} is empty")));
        }
        Ok(GroundTruth { labels, sizes })
    }

    /// Contiguous blocks: the first `sizes[0]` vertices in community 0, and so on.
    pub fn from_sizes(sizes: &[usize]) -> Result<Self> {
        let labels = sizes
            .iter()
            .enumerate()
            .flat_map(|(j, &s)| std::iter::repeat_n(j, s))
            .collect();
        GroundTruth::new(labels, sizes.len())
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn k(&self) -> usize {
        self.sizes.len()
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn to_partition(&self) -> Partition {
        Partition::from_labels(&self.labels)
    }
}
