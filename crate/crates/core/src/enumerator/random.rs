use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::Graph;

/// Proposals spent by [`random_bounded_graph`]: `n * d`.
pub fn default_proposal_budget(n: usize, d: usize) -> usize {
    n.saturating_mul(d)
}

/// Seeded random graph with maximum degree at most `d`.
///
/// Draws uniform vertex pairs and keeps a pair unless it is a loop, already
/// an edge, or touches a vertex of degree `d`; stops after
/// `default_proposal_budget(n, d)` proposals.
pub fn random_bounded_graph(n: usize, d: usize, seed: u64) -> Graph {
    random_bounded_graph_with_budget(n, d, seed, default_proposal_budget(n, d))
}

pub fn random_bounded_graph_with_budget(n: usize, d: usize, seed: u64, proposals: usize) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut adjacent: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut edges = Vec::new();
    if n >= 2 {
        for _ in 0..proposals {
            let u = rng.random_range(0..n);
            let v = rng.random_range(0..n);
            if u == v || adjacent[u].len() >= d || adjacent[v].len() >= d {
                continue;
            }
            if adjacent[u].contains(&(v as u32)) {
                continue;
            }
            adjacent[u].push(v as u32);
            adjacent[v].push(u as u32);
            edges.push((u, v));
        }
    }
    Graph::new(n, edges).expect("generated pairs are valid")
}
