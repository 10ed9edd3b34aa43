//! Uniform Catalan trees via the cycle lemma.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::tree::CatalanTree;

/// Uniform Dyck word of semilength `n` as a bool vector (`true` = up).
pub fn random_dyck_word<R: rand::Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<bool> {
    let mut w: Vec<bool> = std::iter::repeat_n(true, n).chain(std::iter::repeat_n(false, n + 1)).collect();
    w.shuffle(rng);
    // Exactly one rotation of a sequence with sum -1 has all proper prefix
    // sums >= 0: start right after the first minimum of the prefix sums.
    let mut h = 0i64;
    let mut min = 0i64;
    let mut argmin = 0usize;
    for (i, &u) in w.iter().enumerate() {
        h += if u { 1 } else { -1 };
        if h < min {
            min = h;
            argmin = i + 1;
        }
    }
    let len = w.len();
    w.rotate_left(argmin % len);
    w.pop();
    w
}

/// Exactly uniform over the `C_n` binary plane trees on `n` nodes.
pub fn random_catalan_tree(n: usize, seed: u64) -> CatalanTree {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    tree_from_word(&random_dyck_word(n, &mut rng))
}

fn tree_from_word(w: &[bool]) -> CatalanTree {
    let s: String = w.iter().map(|&u| if u { '(' } else { ')' }).collect();
    CatalanTree::from_parens(&s).expect("cycle lemma output is balanced")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DepthStatistics {
    pub n: usize,
    pub samples: usize,
    /// Mean depth of a uniformly chosen node of a uniformly random tree.
    pub mean_node_depth: f64,
    /// `tail_counts[d]` = number of (tree, node) pairs with depth >= d.
    pub tail_counts: Vec<u64>,
    /// Height of each sampled tree, histogrammed.
    pub max_depth_histogram: BTreeMap<usize, u64>,
}

impl DepthStatistics {
    /// Fraction of sampled nodes at depth >= d.
    pub fn tail_fraction(&self, d: usize) -> f64 {
        let total = (self.n * self.samples) as f64;
        self.tail_counts.get(d).map_or(0.0, |&c| c as f64 / total)
    }
}

/// Depth statistics over `samples` trees drawn from one seeded stream.
pub fn depth_statistics(n: usize, samples: usize, seed: u64) -> DepthStatistics {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts: Vec<u64> = vec![0; n.max(1)];
    let mut hist = BTreeMap::new();
    let mut sum: u128 = 0;
    for _ in 0..samples {
        let t = tree_from_word(&random_dyck_word(n, &mut rng));
        let d = t.depths();
        let mut h = 0;
        for &x in &d {
            counts[x] += 1;
            sum += x as u128;
            h = h.max(x);
        }
        *hist.entry(h).or_insert(0) += 1;
    }
    let mut tail = vec![0u64; counts.len() + 1];
    for d in (0..counts.len()).rev() {
        tail[d] = tail[d + 1] + counts[d];
    }
    DepthStatistics {
        n,
        samples,
        mean_node_depth: sum as f64 / (n * samples) as f64,
        tail_counts: tail,
        max_depth_histogram: hist,
    }
}
