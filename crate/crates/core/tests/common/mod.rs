//! Test-only oracles and fixtures.

#![allow(dead_code)]

use backbone_core::Graph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Exhaustive answer for graphs of at most 24 vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct Exhaustive {
    pub alpha: usize,
    /// Every maximum independent set, each ascending, in mask order.
    pub optima: Vec<Vec<usize>>,
    pub core: Vec<usize>,
    pub rho: f64,
}

/// Scans all `2^n` vertex subsets; independence of a mask is derived from
/// the mask without its lowest vertex.
pub fn exhaustive(g: &Graph) -> Exhaustive {
    let n = g.n();
    assert!(n <= 24, "exhaustive oracle is limited to 24 vertices");
    let adj: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &w| m | 1 << w))
        .collect();
    let total = 1usize << n;
    let mut independent = vec![false; total];
    independent[0] = true;
    let mut alpha = 0;
    for mask in 1..total {
        let v = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        independent[mask] = independent[rest] && adj[v] & rest as u32 == 0;
        if independent[mask] {
            alpha = alpha.max(mask.count_ones() as usize);
        }
    }
    let optima: Vec<Vec<usize>> = (0..total)
        .filter(|&m| independent[m] && m.count_ones() as usize == alpha)
        .map(|m| (0..n).filter(|&v| m >> v & 1 == 1).collect())
        .collect();
    let core: Vec<usize> = (0..n)
        .filter(|v| optima.iter().all(|s| s.contains(v)))
        .collect();
    let rho = if alpha == 0 { 1.0 } else { core.len() as f64 / alpha as f64 };
    Exhaustive {
        alpha,
        optima,
        core,
        rho,
    }
}

/// Independent G(n, p) sample for oracle comparisons.
pub fn random_graph(n: usize, p: f64, rng: &mut impl Rng) -> Graph {
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter(|_| rng.gen_bool(p))
        .collect();
    Graph::new(n, edges).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Four disjoint 5-cliques on vertices `5c..5c+5`.
pub fn planted_clusters() -> Graph {
    Graph::new(
        20,
        (0..4).flat_map(|c| (0..5).flat_map(move |i| (i + 1..5).map(move |j| (5 * c + i, 5 * c + j)))),
    )
    .unwrap()
}

/// Cosine similarities for the planted clusters: three tight clusters a
/// few degrees apart and one diffuse cluster spread over 120 degrees.
/// Geometric coverage spends several picks on the diffuse cluster even
/// though it is a single clique in the graph.
pub fn planted_similarity() -> Vec<Vec<f64>> {
    let mut angles = vec![60.0, 90.0, 120.0, 150.0, 180.0];
    for centre in [0.0, 10.0, 20.0] {
        angles.extend([-1.0, -0.5, 0.0, 0.5, 1.0].map(|d| centre + d));
    }
    let rad: Vec<f64> = angles.iter().map(|a: &f64| a.to_radians()).collect();
    rad.iter()
        .map(|a| rad.iter().map(|b| (a - b).cos()).collect())
        .collect()
}
