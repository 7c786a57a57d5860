//! Null-model ensembles and subset-selection baselines for checking that
//! a backbone reflects the graph's structure rather than its size and
//! density alone.

use std::collections::{BTreeMap, HashSet};
use std::time::Duration;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{count_violations, Graph};
use crate::mis::solve_exact;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NullModel {
    /// Uniform graphs with the same vertex and edge counts, G(n, m).
    Er,
    /// Degree-preserving double-edge-swap rewiring.
    Config,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NullTrial {
    pub index: usize,
    /// `None` when the trial was flagged (solver timeout or failed rewiring).
    pub alpha: Option<usize>,
    pub accepted_swaps: Option<usize>,
    pub flag: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NullEnsembleStats {
    pub model: NullModel,
    pub trials: usize,
    pub seed: u64,
    pub real_alpha: usize,
    pub per_trial: Vec<NullTrial>,
    pub alpha_histogram: BTreeMap<usize, usize>,
    /// `(#{alpha <= real_alpha} + 1) / (valid trials + 1)`.
    pub empirical_p: f64,
    pub flagged: usize,
    pub note: String,
}

impl NullEnsembleStats {
    pub fn alpha_values(&self) -> Vec<usize> {
        self.per_trial.iter().filter_map(|t| t.alpha).collect()
    }

    fn assemble(
        model: NullModel,
        seed: u64,
        real_alpha: usize,
        per_trial: Vec<NullTrial>,
        note: &str,
    ) -> Self {
        let values: Vec<usize> = per_trial.iter().filter_map(|t| t.alpha).collect();
        let mut hist = BTreeMap::new();
        for &a in &values {
            *hist.entry(a).or_insert(0) += 1;
        }
        let at_most = values.iter().filter(|&&a| a <= real_alpha).count();
        NullEnsembleStats {
            model,
            trials: per_trial.len(),
            seed,
            real_alpha,
            flagged: per_trial.len() - values.len(),
            empirical_p: (at_most + 1) as f64 / (values.len() + 1) as f64,
            alpha_histogram: hist,
            per_trial,
            note: note.to_owned(),
        }
    }
}

/// RNG for trial `index` of a run seeded with `seed`; independent of
/// scheduling order.
pub fn trial_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// Uniform simple graph with exactly `m` edges on `n` vertices.
pub fn sample_gnm(n: usize, m: usize, rng: &mut impl Rng) -> Result<Graph> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    if m > pairs.len() {
        return Err(Error::input(format!("{m} edges do not fit on {n} vertices")));
    }
    let picked = sample(rng, pairs.len(), m);
    Graph::new(n, picked.into_iter().map(|k| pairs[k]))
}

fn real_alpha(g: &Graph, time_limit: Option<Duration>) -> Result<usize> {
    let r = solve_exact(g, time_limit);
    if !r.exact {
        return Err(Error::Infeasible("exact solve of the input graph timed out".into()));
    }
    Ok(r.alpha)
}

fn solved(index: usize, g: &Graph, time_limit: Option<Duration>, swaps: Option<usize>) -> NullTrial {
    let r = solve_exact(g, time_limit);
    NullTrial {
        index,
        alpha: r.exact.then_some(r.alpha),
        accepted_swaps: swaps,
        flag: (!r.exact).then(|| "solver timeout".to_owned()),
    }
}

/// Erdos-Renyi null ensemble on the same `(N, E)`.
pub fn er_null(g: &Graph, trials: usize, seed: u64, time_limit: Option<Duration>) -> Result<NullEnsembleStats> {
    if trials == 0 {
        return Err(Error::input("trials must be >= 1"));
    }
    let real = real_alpha(g, time_limit)?;
    let per_trial = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            let null = sample_gnm(g.n(), g.edge_count(), &mut rng)?;
            Ok(solved(t, &null, time_limit, None))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(NullEnsembleStats::assemble(
        NullModel::Er,
        seed,
        real,
        per_trial,
        "G(n,m): exact edge count, uniform over simple graphs",
    ))
}

/// Result of degree-preserving rewiring.
#[derive(Debug, Clone)]
pub struct Rewired {
    pub graph: Graph,
    pub accepted: usize,
    pub attempts: usize,
}

/// Double-edge swaps `(a,b),(c,d) -> (a,d),(c,b)` rejecting self-loops and
/// multi-edges, until `target` swaps are accepted or `max_attempts` run out.
pub fn rewire(g: &Graph, target: usize, max_attempts: usize, rng: &mut impl Rng) -> Result<Rewired> {
    let mut edges: Vec<(usize, usize)> = g.edges().to_vec();
    if edges.len() < 2 {
        return Err(Error::input("rewiring needs at least two edges"));
    }
    let mut present: HashSet<(usize, usize)> = edges.iter().copied().collect();
    let key = |a: usize, b: usize| (a.min(b), a.max(b));
    let mut accepted = 0;
    let mut attempts = 0;
    while accepted < target && attempts < max_attempts {
        attempts += 1;
        let i = rng.gen_range(0..edges.len());
        let j = rng.gen_range(0..edges.len());
        if i == j {
            continue;
        }
        let (a, b) = edges[i];
        let (mut c, mut d) = edges[j];
        if rng.gen_bool(0.5) {
            std::mem::swap(&mut c, &mut d);
        }
        if a == d || c == b || present.contains(&key(a, d)) || present.contains(&key(c, b)) {
            continue;
        }
        present.remove(&edges[i]);
        present.remove(&edges[j]);
        edges[i] = key(a, d);
        edges[j] = key(c, b);
        present.insert(edges[i]);
        present.insert(edges[j]);
        accepted += 1;
    }
    Ok(Rewired {
        graph: Graph::new(g.n(), edges)?,
        accepted,
        attempts,
    })
}

/// Accepted swaps required per edge in a configuration-model trial.
pub const SWAPS_PER_EDGE: usize = 10;
/// Attempt budget as a multiple of the accepted-swap target.
pub const ATTEMPTS_PER_SWAP: usize = 100;

/// Configuration-model null ensemble: every trial keeps the exact degree
/// sequence. Trials that cannot reach `10 * E` accepted swaps are flagged.
pub fn config_null(
    g: &Graph,
    trials: usize,
    seed: u64,
    time_limit: Option<Duration>,
) -> Result<NullEnsembleStats> {
    if trials == 0 {
        return Err(Error::input("trials must be >= 1"));
    }
    if g.edge_count() < 2 {
        return Err(Error::input("configuration null needs at least two edges"));
    }
    let real = real_alpha(g, time_limit)?;
    let target = SWAPS_PER_EDGE * g.edge_count();
    let per_trial = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            let r = rewire(g, target, target * ATTEMPTS_PER_SWAP, &mut rng)?;
            if r.accepted < target {
                return Ok(NullTrial {
                    index: t,
                    alpha: None,
                    accepted_swaps: Some(r.accepted),
                    flag: Some(format!("only {} of {target} swaps accepted", r.accepted)),
                });
            }
            Ok(solved(t, &r.graph, time_limit, Some(r.accepted)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(NullEnsembleStats::assemble(
        NullModel::Config,
        seed,
        real,
        per_trial,
        "double-edge-swap rewiring, 10*E accepted swaps per trial",
    ))
}

/// Random `d`-regular graph on `n` vertices: the circulant with offsets
/// `1..=d/2` (plus the antipodal chord for odd `d`), rewired by `10 * E`
/// double-edge swaps.
pub fn random_regular(n: usize, d: usize, seed: u64) -> Result<Graph> {
    if d >= n || (n * d) % 2 == 1 {
        return Err(Error::input(format!("no {d}-regular graph on {n} vertices")));
    }
    let mut edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (1..=d / 2).map(move |k| (i, (i + k) % n)))
        .collect();
    if d % 2 == 1 {
        edges.extend((0..n / 2).map(|i| (i, i + n / 2)));
    }
    let base = Graph::new(n, edges)?;
    if base.edge_count() < 2 {
        return Ok(base);
    }
    let target = SWAPS_PER_EDGE * base.edge_count();
    Ok(rewire(&base, target, target * ATTEMPTS_PER_SWAP, &mut trial_rng(seed, 0))?.graph)
}

fn check_square(m: &[Vec<f64>], size: usize, zero_diagonal: bool) -> Result<()> {
    let n = m.len();
    if n == 0 {
        return Err(Error::input("empty matrix"));
    }
    if size == 0 || size > n {
        return Err(Error::input(format!("subset size {size} outside 1..={n}")));
    }
    for (i, row) in m.iter().enumerate() {
        if row.len() != n {
            return Err(Error::input(format!("row {i} has length {}, expected {n}", row.len())));
        }
        for (j, &v) in row.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::input(format!("entry ({i},{j}) is not finite")));
            }
            if (v - m[j][i]).abs() > 1e-9 {
                return Err(Error::input(format!("matrix not symmetric at ({i},{j})")));
            }
        }
        if zero_diagonal && row[i] != 0.0 {
            return Err(Error::input(format!("distance diagonal at {i} is not zero")));
        }
    }
    Ok(())
}

/// Farthest-first (Gonzalez) k-center selection. Starts from the vertex
/// with the largest total distance; ties resolve to the lowest index.
pub fn k_center_select(dist: &[Vec<f64>], size: usize) -> Result<Vec<usize>> {
    check_square(dist, size, true)?;
    let n = dist.len();
    let total = |i: usize| dist[i].iter().sum::<f64>();
    let start = (0..n)
        .max_by(|&a, &b| total(a).total_cmp(&total(b)).then(b.cmp(&a)))
        .expect("non-empty");
    let mut selected = vec![start];
    let mut nearest: Vec<f64> = dist[start].clone();
    let mut taken = vec![false; n];
    taken[start] = true;
    while selected.len() < size {
        let next = (0..n)
            .filter(|&v| !taken[v])
            .max_by(|&a, &b| nearest[a].total_cmp(&nearest[b]).then(b.cmp(&a)))
            .expect("size <= n");
        taken[next] = true;
        selected.push(next);
        for v in 0..n {
            nearest[v] = nearest[v].min(dist[next][v]);
        }
    }
    Ok(selected)
}

/// Greedy facility location: repeatedly add the vertex maximizing
/// `sum_u max_{c in S} sim[u][c]`; ties resolve to the lowest index.
pub fn facility_location_select(sim: &[Vec<f64>], size: usize) -> Result<Vec<usize>> {
    check_square(sim, size, false)?;
    let n = sim.len();
    let mut cover: Vec<f64> = vec![f64::NEG_INFINITY; n];
    let mut taken = vec![false; n];
    let mut selected = Vec::with_capacity(size);
    while selected.len() < size {
        let value = |c: usize| -> f64 { (0..n).map(|u| cover[u].max(sim[u][c])).sum() };
        let next = (0..n)
            .filter(|&c| !taken[c])
            .map(|c| (c, value(c)))
            .max_by(|a, b| a.1.total_cmp(&b.1).then(b.0.cmp(&a.0)))
            .expect("size <= n")
            .0;
        taken[next] = true;
        selected.push(next);
        for u in 0..n {
            cover[u] = cover[u].max(sim[u][next]);
        }
    }
    Ok(selected)
}

/// `|a ∩ b| / |b|`, with `b` the reference backbone; 0 when `b` is empty.
pub fn overlap(a: &[usize], b: &[usize]) -> f64 {
    if b.is_empty() {
        return 0.0;
    }
    let a: HashSet<usize> = a.iter().copied().collect();
    let b: HashSet<usize> = b.iter().copied().collect();
    a.intersection(&b).count() as f64 / b.len() as f64
}

/// `1 - cosine` distances.
pub fn cosine_distances(sim: &[Vec<f64>]) -> Vec<Vec<f64>> {
    sim.iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, &s)| if i == j { 0.0 } else { 1.0 - s })
                .collect()
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaselineMethod {
    KCenter,
    FacilityLocation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineComparison {
    pub method: BaselineMethod,
    pub selected: Vec<usize>,
    pub overlap_with_backbone: f64,
    /// Selected pairs that are edges of the graph.
    pub adjacency_violations: usize,
}

/// Runs both baselines at the backbone's size and scores them against it.
/// `sim` is the similarity matrix used for facility location; k-center uses
/// `1 - sim` when given, otherwise hop distances on `g`.
pub fn compare_baselines(
    g: &Graph,
    backbone: &[usize],
    sim: Option<&[Vec<f64>]>,
) -> Result<Vec<BaselineComparison>> {
    let size = backbone.len().max(1).min(g.n());
    let (dist, sim_owned) = match sim {
        Some(s) => (cosine_distances(s), s.to_vec()),
        None => {
            let hops = g.hop_distances();
            let sim = hops.iter().map(|row| row.iter().map(|h| -h).collect()).collect();
            (hops, sim)
        }
    };
    let mut out = Vec::new();
    for (method, selected) in [
        (BaselineMethod::KCenter, k_center_select(&dist, size)?),
        (BaselineMethod::FacilityLocation, facility_location_select(&sim_owned, size)?),
    ] {
        out.push(BaselineComparison {
            method,
            overlap_with_backbone: overlap(&selected, backbone),
            adjacency_violations: count_violations(g, &selected)?,
            selected,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    #[test]
    fn random_regular_degrees() {
        for (n, d) in [(75, 12), (20, 3), (10, 0)] {
            let g = random_regular(n, d, 4).unwrap();
            assert!(g.degrees().iter().all(|&x| x == d), "{n} {d}");
        }
        assert!(random_regular(5, 3, 0).is_err());
        assert!(random_regular(4, 4, 0).is_err());
        assert_ne!(random_regular(30, 4, 1).unwrap(), random_regular(30, 4, 2).unwrap());
    }

    use super::*;

    #[test]
    fn edgeless_er_null() {
        let s = er_null(&Graph::edgeless(6), 3, 7, None).unwrap();
        assert_eq!(s.alpha_values(), vec![6, 6, 6]);
        assert_eq!(s.empirical_p, 1.0);
    }

    #[test]
    fn star_cannot_be_rewired() {
        let star = Graph::new(6, (1..6).map(|l| (0, l))).unwrap();
        let s = config_null(&star, 2, 1, None).unwrap();
        assert_eq!(s.flagged, 2);
        assert!(s.alpha_values().is_empty());
        assert!(config_null(&Graph::path(2), 1, 0, None).is_err());
    }

    #[test]
    fn matching_rewires_to_matching() {
        let m = Graph::new(8, [(0, 1), (2, 3), (4, 5), (6, 7)]).unwrap();
        let s = config_null(&m, 5, 3, None).unwrap();
        assert_eq!(s.flagged, 0);
        assert!(s.alpha_values().iter().all(|&a| a == 4));
    }

    #[test]
    fn gnm_has_exact_edge_count() {
        let mut rng = trial_rng(1, 0);
        let g = sample_gnm(10, 20, &mut rng).unwrap();
        assert_eq!(g.edge_count(), 20);
        assert!(sample_gnm(3, 4, &mut rng).is_err());
    }

    #[test]
    fn k_center_rectangle() {
        // corners of a 10 x 1 rectangle: 0=(0,0) 1=(10,0) 2=(10,1) 3=(0,1)
        let pts = [(0.0, 0.0), (10.0, 0.0), (10.0, 1.0), (0.0, 1.0)];
        let d: Vec<Vec<f64>> = pts
            .iter()
            .map(|a: &(f64, f64)| pts.iter().map(|b| ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt()).collect())
            .collect();
        let s = k_center_select(&d, 2).unwrap();
        assert_eq!(s, vec![0, 2]);
        assert_eq!(k_center_select(&d, 1).unwrap(), vec![0]);
        let mut all = k_center_select(&d, 4).unwrap();
        all.sort();
        assert_eq!(all, vec![0, 1, 2, 3]);
        assert!(k_center_select(&d, 5).is_err());
    }

    #[test]
    fn facility_location_ties_and_clusters() {
        let flat = vec![vec![0.5; 4]; 4];
        assert_eq!(facility_location_select(&flat, 2).unwrap(), vec![0, 1]);
        let clusters = vec![
            vec![1.0, 0.9, 0.1, 0.1],
            vec![0.9, 1.0, 0.1, 0.1],
            vec![0.1, 0.1, 1.0, 0.9],
            vec![0.1, 0.1, 0.9, 1.0],
        ];
        let s = facility_location_select(&clusters, 2).unwrap();
        assert!(s[0] < 2 && s[1] >= 2);
        let bad = vec![vec![1.0, 0.2], vec![0.3, 1.0]];
        assert!(facility_location_select(&bad, 1).is_err());
    }

    #[test]
    fn overlap_counts() {
        assert_eq!(overlap(&[1, 2], &[1, 2]), 1.0);
        assert_eq!(overlap(&[1, 2], &[3]), 0.0);
        assert_eq!(overlap(&[1, 2, 3], &[3, 4, 5, 6]), 0.25);
        assert_eq!(overlap(&[1], &[]), 0.0);
    }
}
