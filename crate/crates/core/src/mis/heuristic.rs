//! Heuristic comparators: greedy elimination and simulated annealing.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{first_conflict, Graph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GreedyRule {
    /// Delete a maximum-degree vertex until no edge remains.
    #[default]
    MaxDegreeDeletion,
    /// Select a minimum-degree vertex and delete its closed neighbourhood.
    MinDegreeSelection,
}

/// Maximum-degree-first elimination: repeatedly delete a vertex of maximum
/// residual degree (lowest index on ties) until the residual graph is
/// edgeless, then return the survivors.
pub fn greedy_mis(g: &Graph) -> Vec<usize> {
    greedy_with(g, GreedyRule::MaxDegreeDeletion)
}

pub fn greedy_with(g: &Graph, rule: GreedyRule) -> Vec<usize> {
    let n = g.n();
    let mut alive = vec![true; n];
    let mut deg = g.degrees();
    let remove = |v: usize, alive: &mut Vec<bool>, deg: &mut Vec<usize>| {
        alive[v] = false;
        for &w in g.neighbors(v) {
            if alive[w] {
                deg[w] -= 1;
            }
        }
    };
    match rule {
        GreedyRule::MaxDegreeDeletion => loop {
            let pick = (0..n)
                .filter(|&v| alive[v] && deg[v] > 0)
                .max_by(|&a, &b| deg[a].cmp(&deg[b]).then(b.cmp(&a)));
            match pick {
                Some(v) => remove(v, &mut alive, &mut deg),
                None => break,
            }
        },
        GreedyRule::MinDegreeSelection => {
            let mut chosen = Vec::new();
            while let Some(v) = (0..n)
                .filter(|&v| alive[v])
                .min_by(|&a, &b| deg[a].cmp(&deg[b]).then(a.cmp(&b)))
            {
                chosen.push(v);
                let closed: Vec<usize> = std::iter::once(v)
                    .chain(g.neighbors(v).iter().copied().filter(|&w| alive[w]))
                    .collect();
                for u in closed {
                    remove(u, &mut alive, &mut deg);
                }
            }
            chosen.sort_unstable();
            return chosen;
        }
    }
    (0..n).filter(|&v| alive[v]).collect()
}

/// Annealing schedule for [`sa_mis`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SaSchedule {
    pub steps: usize,
    /// Target acceptance rate of uphill moves at the start.
    pub initial_acceptance: f64,
    /// Final temperature as a fraction of the initial one.
    pub final_ratio: f64,
    /// Energy cost per violated edge.
    pub penalty: f64,
}

impl Default for SaSchedule {
    fn default() -> Self {
        SaSchedule {
            steps: 20_000,
            initial_acceptance: 0.8,
            final_ratio: 1e-3,
            penalty: 2.0,
        }
    }
}

struct SaState<'a> {
    g: &'a Graph,
    member: Vec<bool>,
    /// Number of selected neighbours of each vertex.
    conflicts: Vec<usize>,
    size: usize,
    violations: usize,
}

impl<'a> SaState<'a> {
    fn new(g: &'a Graph) -> Self {
        SaState {
            g,
            member: vec![false; g.n()],
            conflicts: vec![0; g.n()],
            size: 0,
            violations: 0,
        }
    }

    fn energy(&self, penalty: f64) -> f64 {
        -(self.size as f64) + penalty * self.violations as f64
    }

    fn toggle_delta(&self, v: usize, penalty: f64) -> f64 {
        if self.member[v] {
            1.0 - penalty * self.conflicts[v] as f64
        } else {
            -1.0 + penalty * self.conflicts[v] as f64
        }
    }

    fn toggle(&mut self, v: usize) {
        let adding = !self.member[v];
        self.member[v] = adding;
        if adding {
            self.size += 1;
            self.violations += self.conflicts[v];
        } else {
            self.size -= 1;
            self.violations -= self.conflicts[v];
        }
        for &w in self.g.neighbors(v) {
            if adding {
                self.conflicts[w] += 1;
            } else {
                self.conflicts[w] -= 1;
            }
        }
    }
}

enum Move {
    Toggle(usize),
    Swap(usize, usize),
}

fn propose(state: &SaState, rng: &mut ChaCha8Rng) -> Move {
    let n = state.g.n();
    let v = rng.gen_range(0..n);
    if state.member[v] && state.size < n && rng.gen_bool(0.5) {
        // swap a member with a random non-member neighbour, if any
        let outside: Vec<usize> = state
            .g
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&w| !state.member[w])
            .collect();
        if !outside.is_empty() {
            return Move::Swap(v, outside[rng.gen_range(0..outside.len())]);
        }
    }
    Move::Toggle(v)
}

fn apply(state: &mut SaState, mv: &Move, penalty: f64) -> f64 {
    match *mv {
        Move::Toggle(v) => {
            let d = state.toggle_delta(v, penalty);
            state.toggle(v);
            d
        }
        Move::Swap(a, b) => {
            let before = state.energy(penalty);
            state.toggle(a);
            state.toggle(b);
            state.energy(penalty) - before
        }
    }
}

fn undo(state: &mut SaState, mv: &Move) {
    match *mv {
        Move::Toggle(v) => state.toggle(v),
        Move::Swap(a, b) => {
            state.toggle(b);
            state.toggle(a);
        }
    }
}

/// Extends an independent set greedily (ascending index) until maximal.
pub fn make_maximal(g: &Graph, set: &[usize]) -> Vec<usize> {
    let mut member = vec![false; g.n()];
    let mut blocked = vec![false; g.n()];
    for &v in set {
        member[v] = true;
        blocked[v] = true;
        for &w in g.neighbors(v) {
            blocked[w] = true;
        }
    }
    for v in 0..g.n() {
        if !blocked[v] {
            member[v] = true;
            blocked[v] = true;
            for &w in g.neighbors(v) {
                blocked[w] = true;
            }
        }
    }
    (0..g.n()).filter(|&v| member[v]).collect()
}

/// Simulated annealing over vertex subsets with a penalty per violated
/// edge. Returns the largest conflict-free set seen, extended to a maximal
/// independent set. Deterministic for a fixed seed.
pub fn sa_mis(g: &Graph, schedule: &SaSchedule, seed: u64) -> Vec<usize> {
    let n = g.n();
    if n == 0 {
        return Vec::new();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut state = SaState::new(g);
    let penalty = schedule.penalty;

    // Initial temperature from the mean uphill delta of random probes.
    let mut uphill = Vec::new();
    for _ in 0..100 {
        let mv = propose(&state, &mut rng);
        let d = apply(&mut state, &mv, penalty);
        if d > 0.0 {
            uphill.push(d);
        }
        if d > 0.0 || rng.gen_bool(0.5) {
            undo(&mut state, &mv);
        }
    }
    let mean_up = if uphill.is_empty() {
        1.0
    } else {
        uphill.iter().sum::<f64>() / uphill.len() as f64
    };
    let t0 = -mean_up / schedule.initial_acceptance.clamp(1e-6, 1.0 - 1e-6).ln();
    let steps = schedule.steps.max(1);
    let cooling = schedule.final_ratio.max(1e-12).powf(1.0 / steps as f64);

    let snapshot = |s: &SaState| (0..n).filter(|&v| s.member[v]).collect::<Vec<_>>();
    let mut best: Vec<usize> = if state.violations == 0 {
        snapshot(&state)
    } else {
        Vec::new()
    };
    let mut t = t0;
    for _ in 0..steps {
        let mv = propose(&state, &mut rng);
        let d = apply(&mut state, &mv, penalty);
        if d > 0.0 && rng.gen::<f64>() >= (-d / t).exp() {
            undo(&mut state, &mv);
        } else if state.violations == 0 && state.size > best.len() {
            best = snapshot(&state);
        }
        t *= cooling;
    }
    make_maximal(g, &best)
}

/// `|set| / alpha(g)`; the set must be independent.
pub fn approximation_ratio(set: &[usize], g: &Graph) -> Result<f64> {
    let alpha = super::exact::solve_exact(g, None).alpha;
    ratio_with_alpha(set, g, alpha)
}

pub fn ratio_with_alpha(set: &[usize], g: &Graph, alpha: usize) -> Result<f64> {
    if let Some((a, b)) = first_conflict(g, set)? {
        return Err(Error::NotIndependent(a, b));
    }
    if alpha == 0 {
        return Ok(if set.is_empty() { 1.0 } else { 0.0 });
    }
    Ok(set.len() as f64 / alpha as f64)
}
