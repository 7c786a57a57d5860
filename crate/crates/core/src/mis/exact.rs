//! Complete branch-and-bound search for maximum independent sets.
//!
//! Every search node applies the safe reductions (isolated vertices are
//! taken; a degree-one vertex is taken in place of its neighbour when only
//! one optimum is needed), bounds the residual problem by a greedy clique
//! cover, and branches on a maximum-degree vertex: first "in" (its closed
//! neighbourhood removed), then "out".

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::bitset::VSet;
use super::heuristic::greedy_mis;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Default enumeration cap on the number of optimal solutions.
pub const DEFAULT_OPTIMA_CAP: usize = 500;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct MisStats {
    /// Search nodes expanded.
    pub nodes: u64,
    /// Wall time; not part of any deterministic output.
    #[serde(skip)]
    pub elapsed: Duration,
    pub timed_out: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MisResult {
    pub alpha: usize,
    /// One optimal vertex set, ascending.
    pub witness: Vec<usize>,
    /// False when the time limit interrupted the search; `alpha` is then a
    /// lower bound realized by `witness`.
    pub exact: bool,
    pub stats: MisStats,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimaEnumeration {
    pub alpha: usize,
    /// Distinct maximum independent sets in search order, each ascending.
    pub solutions: Vec<Vec<usize>>,
    pub cap: usize,
    pub hit_cap: bool,
    /// False when a time limit cut the enumeration short.
    pub complete: bool,
    pub stats: MisStats,
}

impl OptimaEnumeration {
    /// Vertices common to every enumerated solution.
    pub fn intersection(&self) -> Vec<usize> {
        let Some(first) = self.solutions.first() else {
            return Vec::new();
        };
        first
            .iter()
            .copied()
            .filter(|v| self.solutions.iter().all(|s| s.binary_search(v).is_ok()))
            .collect()
    }

    /// Rigidity from the intersection of all optima; only meaningful when
    /// the enumeration completed below the cap.
    pub fn rho(&self) -> f64 {
        rho(self.intersection().len(), self.alpha)
    }
}

/// Number of optimal solutions: exact, or a lower bound when the
/// enumeration was capped or interrupted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OptimaCount {
    pub count: usize,
    pub lower_bound: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VertexCheck {
    pub vertex: usize,
    /// Independence number of the graph with this vertex deleted, when
    /// the search finished (otherwise `None`).
    pub alpha_without: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RigidityReport {
    pub alpha: usize,
    /// Persistent core: vertices present in every maximum independent set.
    pub core: Vec<usize>,
    pub rho: f64,
    pub n_optima: Option<OptimaCount>,
    /// True when every per-vertex exclusion solve completed.
    pub certified: bool,
    pub checks: Vec<VertexCheck>,
}

/// `|core| / alpha`, with the empty-graph convention `rho = 1`.
pub fn rho(core_len: usize, alpha: usize) -> f64 {
    if alpha == 0 {
        1.0
    } else {
        core_len as f64 / alpha as f64
    }
}

struct Search<'a> {
    nbr: &'a [VSet],
    deadline: Option<Instant>,
    nodes: u64,
    timed_out: bool,
}

struct Best {
    set: Option<Vec<usize>>,
    len: usize,
    stop_at: usize,
}

impl<'a> Search<'a> {
    fn new(nbr: &'a [VSet], limit: Option<Duration>) -> Self {
        Search {
            nbr,
            deadline: limit.map(|d| Instant::now() + d),
            nodes: 0,
            timed_out: false,
        }
    }

    fn tick(&mut self) -> bool {
        self.nodes += 1;
        if !self.timed_out && self.nodes.is_multiple_of(1024) {
            if let Some(deadline) = self.deadline {
                self.timed_out = Instant::now() >= deadline;
            }
        }
        self.timed_out
    }

    fn stats(&self, started: Instant) -> MisStats {
        MisStats {
            nodes: self.nodes,
            elapsed: started.elapsed(),
            timed_out: self.timed_out,
        }
    }

    /// Size of a greedy partition of `p` into cliques; an upper bound on
    /// the independence number of the subgraph induced by `p`.
    fn clique_cover(&self, p: &VSet) -> usize {
        let mut commons: Vec<VSet> = Vec::new();
        'next: for v in p.iter() {
            for c in commons.iter_mut() {
                if c.contains(v) {
                    c.intersect_with(&self.nbr[v]);
                    continue 'next;
                }
            }
            let mut c = self.nbr[v].clone();
            c.intersect_with(p);
            commons.push(c);
        }
        commons.len()
    }

    fn branch_vertex(&self, p: &VSet) -> usize {
        let mut best = (0, usize::MAX);
        for v in p.iter() {
            let d = p.intersection_len(&self.nbr[v]);
            if best.1 == usize::MAX || d > best.0 {
                best = (d, v);
            }
        }
        best.1
    }

    fn maximize(&mut self, mut p: VSet, chosen: &mut Vec<usize>, best: &mut Best) {
        if self.tick() || best.len >= best.stop_at {
            return;
        }
        let base = chosen.len();
        loop {
            let mut changed = false;
            let snapshot: Vec<usize> = p.iter().collect();
            for v in snapshot {
                if !p.contains(v) {
                    continue;
                }
                let deg = p.intersection_len(&self.nbr[v]);
                if deg <= 1 {
                    if deg == 1 {
                        let mut only = self.nbr[v].clone();
                        only.intersect_with(&p);
                        p.remove(only.first().expect("one neighbour"));
                    }
                    chosen.push(v);
                    p.remove(v);
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        if p.is_empty() {
            if chosen.len() > best.len {
                best.len = chosen.len();
                let mut s = chosen.clone();
                s.sort_unstable();
                best.set = Some(s);
            }
            chosen.truncate(base);
            return;
        }
        if chosen.len() + self.clique_cover(&p) <= best.len {
            chosen.truncate(base);
            return;
        }
        let v = self.branch_vertex(&p);
        let mut with_v = p.clone();
        with_v.remove(v);
        with_v.difference_with(&self.nbr[v]);
        chosen.push(v);
        self.maximize(with_v, chosen, best);
        chosen.pop();
        p.remove(v);
        self.maximize(p, chosen, best);
        chosen.truncate(base);
    }

    fn enumerate(
        &mut self,
        mut p: VSet,
        chosen: &mut Vec<usize>,
        target: usize,
        cap: usize,
        out: &mut Vec<Vec<usize>>,
    ) {
        if self.tick() || out.len() >= cap {
            return;
        }
        let base = chosen.len();
        // An isolated residual vertex belongs to every maximum extension.
        let isolated: Vec<usize> = p
            .iter()
            .filter(|&v| p.intersection_len(&self.nbr[v]) == 0)
            .collect();
        for v in isolated {
            chosen.push(v);
            p.remove(v);
        }
        if p.is_empty() {
            if chosen.len() == target {
                let mut s = chosen.clone();
                s.sort_unstable();
                out.push(s);
            }
            chosen.truncate(base);
            return;
        }
        if chosen.len() + self.clique_cover(&p) < target {
            chosen.truncate(base);
            return;
        }
        let v = self.branch_vertex(&p);
        let mut with_v = p.clone();
        with_v.remove(v);
        with_v.difference_with(&self.nbr[v]);
        chosen.push(v);
        self.enumerate(with_v, chosen, target, cap, out);
        chosen.pop();
        p.remove(v);
        self.enumerate(p, chosen, target, cap, out);
        chosen.truncate(base);
    }
}

fn neighbour_sets(g: &Graph) -> Vec<VSet> {
    (0..g.n())
        .map(|v| {
            let mut s = VSet::empty(g.n());
            for &w in g.neighbors(v) {
                s.insert(w);
            }
            s
        })
        .collect()
}

/// Computes the independence number and one optimal set.
///
/// Deterministic for a fixed graph. On timeout the result is flagged
/// inexact and carries the best set found so far.
pub fn solve_exact(g: &Graph, time_limit: Option<Duration>) -> MisResult {
    let started = Instant::now();
    let nbr = neighbour_sets(g);
    let mut search = Search::new(&nbr, time_limit);
    let seed = greedy_mis(g);
    let mut best = Best {
        len: seed.len(),
        set: Some(seed),
        stop_at: usize::MAX,
    };
    search.maximize(VSet::full(g.n()), &mut Vec::new(), &mut best);
    let witness = best.set.expect("greedy seed is always present");
    MisResult {
        alpha: witness.len(),
        witness,
        exact: !search.timed_out,
        stats: search.stats(started),
    }
}

/// Lists maximum independent sets until `cap` distinct ones are found.
pub fn enumerate_optima(g: &Graph, cap: usize, time_limit: Option<Duration>) -> OptimaEnumeration {
    let started = Instant::now();
    let mis = solve_exact(g, time_limit);
    let remaining = time_limit.map(|d| d.saturating_sub(started.elapsed()));
    let nbr = neighbour_sets(g);
    let mut search = Search::new(&nbr, remaining);
    let mut solutions = Vec::new();
    if cap > 0 {
        search.enumerate(VSet::full(g.n()), &mut Vec::new(), mis.alpha, cap, &mut solutions);
    }
    let timed_out = search.timed_out || !mis.exact;
    OptimaEnumeration {
        alpha: mis.alpha,
        hit_cap: solutions.len() >= cap,
        solutions,
        cap,
        complete: !timed_out,
        stats: MisStats {
            nodes: mis.stats.nodes + search.nodes,
            elapsed: started.elapsed(),
            timed_out,
        },
    }
}

/// Whether `g` minus `excluded` still has an independent set of size
/// `target`. `None` on timeout.
fn has_is_without(
    g: &Graph,
    nbr: &[VSet],
    excluded: usize,
    target: usize,
    limit: Option<Duration>,
) -> Option<bool> {
    if target == 0 {
        return Some(true);
    }
    let mut search = Search::new(nbr, limit);
    let mut best = Best {
        set: None,
        len: target - 1,
        stop_at: target,
    };
    let mut p = VSet::full(g.n());
    p.remove(excluded);
    search.maximize(p, &mut Vec::new(), &mut best);
    if best.set.is_some() {
        Some(true)
    } else if search.timed_out {
        None
    } else {
        Some(false)
    }
}

/// Certifies the persistent core by per-vertex exclusion: `v` is in the
/// core iff deleting it lowers the independence number.
///
/// Only witness vertices can be core members. A vertex whose exclusion
/// solve times out is left out of the core and the report is marked
/// uncertified. The solves run in parallel and merge by vertex index.
pub fn certify_core(
    g: &Graph,
    mis: &MisResult,
    per_vertex_limit: Option<Duration>,
) -> Result<RigidityReport> {
    if !mis.exact {
        return Err(Error::input("core certification needs an exact independence number"));
    }
    if !crate::graph::is_independent_set(g, &mis.witness)? || mis.witness.len() != mis.alpha {
        return Err(Error::input("witness is not an independent set of size alpha"));
    }
    let nbr = neighbour_sets(g);
    let alpha = mis.alpha;
    let outcomes: Vec<(usize, Option<bool>)> = mis
        .witness
        .par_iter()
        .map(|&v| (v, has_is_without(g, &nbr, v, alpha, per_vertex_limit)))
        .collect();
    let mut core = Vec::new();
    let mut checks = Vec::with_capacity(outcomes.len());
    let mut certified = true;
    for (v, outcome) in outcomes {
        let alpha_without = match outcome {
            Some(true) => Some(alpha),
            Some(false) => {
                core.push(v);
                Some(alpha - 1)
            }
            None => {
                certified = false;
                None
            }
        };
        checks.push(VertexCheck {
            vertex: v,
            alpha_without,
        });
    }
    Ok(RigidityReport {
        alpha,
        rho: rho(core.len(), alpha),
        core,
        n_optima: None,
        certified,
        checks,
    })
}

/// Solve, enumerate up to `cap`, and certify the core in one pass.
pub fn analyze_rigidity(
    g: &Graph,
    cap: usize,
    time_limit: Option<Duration>,
) -> Result<(MisResult, OptimaEnumeration, RigidityReport)> {
    let mis = solve_exact(g, time_limit);
    if !mis.exact {
        return Err(Error::Infeasible(format!(
            "exact solve did not finish within {:?}",
            time_limit.unwrap_or_default()
        )));
    }
    let optima = enumerate_optima(g, cap, time_limit);
    let mut report = certify_core(g, &mis, time_limit)?;
    report.n_optima = Some(OptimaCount {
        count: optima.solutions.len(),
        lower_bound: optima.hit_cap || !optima.complete,
    });
    Ok((mis, optima, report))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn five_cycle() {
        let r = solve_exact(&Graph::cycle(5), None);
        assert_eq!(r.alpha, 2);
        assert!(r.exact);
        assert!(crate::graph::is_independent_set(&Graph::cycle(5), &r.witness).unwrap());
        assert_eq!(enumerate_optima(&Graph::cycle(5), 500, None).solutions.len(), 5);
    }

    #[test]
    fn edgeless_takes_everything() {
        let r = solve_exact(&Graph::edgeless(7), None);
        assert_eq!(r.alpha, 7);
        assert_eq!(r.witness, (0..7).collect::<Vec<_>>());
    }

    #[test]
    fn empty_graph_has_rho_one() {
        let g = Graph::edgeless(0);
        let (mis, optima, report) = analyze_rigidity(&g, 10, None).unwrap();
        assert_eq!(mis.alpha, 0);
        assert_eq!(optima.solutions, vec![Vec::<usize>::new()]);
        assert_eq!(report.rho, 1.0);
    }

    #[test]
    fn path_three_core() {
        let g = Graph::path(3);
        let mis = solve_exact(&g, None);
        let report = certify_core(&g, &mis, None).unwrap();
        assert_eq!(report.alpha, 2);
        assert_eq!(report.core, vec![0, 2]);
        assert_eq!(report.rho, 1.0);
        assert!(report.certified);
    }

    #[test]
    fn enumeration_respects_cap() {
        // three disjoint triangles: 27 optima
        let edges = (0..3).flat_map(|c| {
            let b = 3 * c;
            [(b, b + 1), (b + 1, b + 2), (b, b + 2)]
        });
        let g = Graph::new(9, edges).unwrap();
        let all = enumerate_optima(&g, 500, None);
        assert_eq!(all.solutions.len(), 27);
        assert!(!all.hit_cap);
        assert_eq!(all.rho(), 0.0);
        let capped = enumerate_optima(&g, 10, None);
        assert_eq!(capped.solutions.len(), 10);
        assert!(capped.hit_cap);
    }

    #[test]
    fn certify_rejects_inexact_input() {
        let g = Graph::cycle(5);
        let mut mis = solve_exact(&g, None);
        mis.exact = false;
        assert!(certify_core(&g, &mis, None).is_err());
    }
}
