//! Randomised invariants checked against the exhaustive oracle.

mod common;

use backbone_core::mis::{certify_core, enumerate_optima, greedy_mis, make_maximal, sa_mis, solve_exact, SaSchedule};
use backbone_core::register::{pulse_spec, PulseVariant};
use backbone_core::shots::{analyze, Regime, ShotSet};
use backbone_core::structure::{rewire, trial_rng};
use backbone_core::textgraph::{build_knn_graph, EmbeddingMatrix, KnnConfig, KnnMode};
use backbone_core::{geometric_adjacency, is_independent_set, udg_check, Coords, Graph};
use proptest::prelude::*;

fn graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        prop::collection::vec(any::<bool>(), pairs).prop_map(move |bits| {
            let mut edges = Vec::new();
            let mut k = 0;
            for i in 0..n {
                for j in i + 1..n {
                    if bits[k] {
                        edges.push((i, j));
                    }
                    k += 1;
                }
            }
            Graph::new(n, edges).unwrap()
        })
    })
}

fn shots_strategy(n: usize, max_shots: usize) -> impl Strategy<Value = Vec<Vec<bool>>> {
    prop::collection::vec(prop::collection::vec(any::<bool>(), n), 1..=max_shots)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn solver_matches_exhaustive(g in graph_strategy(14)) {
        let oracle = common::exhaustive(&g);
        let mis = solve_exact(&g, None);
        prop_assert!(mis.exact);
        prop_assert_eq!(mis.alpha, oracle.alpha);
        prop_assert_eq!(mis.witness.len(), mis.alpha);
        prop_assert!(is_independent_set(&g, &mis.witness).unwrap());
    }

    #[test]
    fn enumeration_and_core_match_exhaustive(g in graph_strategy(11)) {
        let oracle = common::exhaustive(&g);
        let en = enumerate_optima(&g, 10_000, None);
        prop_assert!(en.complete && !en.hit_cap);
        let mut got = en.solutions.clone();
        got.sort();
        let mut want = oracle.optima.clone();
        want.sort();
        prop_assert_eq!(got, want);

        let mis = solve_exact(&g, None);
        let rig = certify_core(&g, &mis, None).unwrap();
        prop_assert!(rig.certified);
        let mut core = rig.core.clone();
        core.sort_unstable();
        prop_assert_eq!(&core, &oracle.core);
        prop_assert_eq!(core, en.intersection());
        prop_assert!((rig.rho - oracle.rho).abs() < 1e-12);
    }

    #[test]
    fn heuristics_never_beat_alpha(g in graph_strategy(14), seed in any::<u64>()) {
        let alpha = common::exhaustive(&g).alpha;
        let greedy = greedy_mis(&g);
        prop_assert!(is_independent_set(&g, &greedy).unwrap());
        prop_assert!(greedy.len() <= alpha);
        let schedule = SaSchedule { steps: 500, ..SaSchedule::default() };
        let sa = sa_mis(&g, &schedule, seed);
        prop_assert!(is_independent_set(&g, &sa).unwrap());
        prop_assert!(sa.len() <= alpha);
    }

    #[test]
    fn make_maximal_is_maximal(g in graph_strategy(14)) {
        let set = make_maximal(&g, &[]);
        prop_assert!(is_independent_set(&g, &set).unwrap());
        for v in 0..g.n() {
            if !set.contains(&v) {
                prop_assert!(g.neighbors(v).iter().any(|w| set.contains(w)));
            }
        }
    }

    #[test]
    fn rewiring_preserves_degrees(g in graph_strategy(14), seed in any::<u64>()) {
        prop_assume!(g.edge_count() >= 2);
        let out = rewire(&g, 3 * g.edge_count(), 300 * g.edge_count(), &mut trial_rng(seed, 0)).unwrap();
        prop_assert_eq!(out.graph.degrees(), g.degrees());
        prop_assert_eq!(out.graph.edge_count(), g.edge_count());
    }

    #[test]
    fn geometric_adjacency_is_exact_for_its_coords(
        pts in prop::collection::vec((-20.0f64..20.0, -20.0f64..20.0), 1..20),
        radius in 0.5f64..15.0,
    ) {
        let coords = Coords::planar(pts.iter().map(|&(x, y)| [x, y]));
        let g = geometric_adjacency(&coords, radius).unwrap();
        let check = udg_check(&g, &coords, radius).unwrap();
        prop_assert!(check.is_exact());
        prop_assert_eq!(check.recall, 1.0);
    }

    #[test]
    fn emb1_round_trips(rows in prop::collection::vec(prop::collection::vec(-1.0f32..1.0, 3), 2..10)) {
        let rows: Vec<Vec<f64>> = rows.into_iter().map(|r| r.into_iter().map(f64::from).collect()).collect();
        let e = EmbeddingMatrix::unlabeled(rows.clone()).unwrap();
        let back = EmbeddingMatrix::from_bytes(&e.to_bytes()).unwrap();
        prop_assert_eq!(back.n_units(), rows.len());
        for (i, r) in rows.iter().enumerate() {
            prop_assert_eq!(back.row(i), r.as_slice());
        }
        prop_assert_eq!(back.to_bytes(), e.to_bytes());
    }

    #[test]
    fn mutual_knn_is_contained_in_union(
        rows in prop::collection::vec(prop::collection::vec(-1.0f64..1.0, 4), 3..16),
        k in 1usize..4,
    ) {
        prop_assume!(rows.iter().all(|r| r.iter().map(|x| x * x).sum::<f64>() > 1e-3));
        prop_assume!(k < rows.len());
        let e = EmbeddingMatrix::unlabeled(rows).unwrap();
        let union = build_knn_graph(&e, &KnnConfig::new(k, KnnMode::Union)).unwrap();
        let mutual = build_knn_graph(&e, &KnnConfig::new(k, KnnMode::Mutual)).unwrap();
        for &(a, b) in mutual.edges() {
            prop_assert!(union.has_edge(a, b));
        }
        let open = build_knn_graph(&e, &KnnConfig::new(k, KnnMode::Union).with_threshold(-1.0)).unwrap();
        for v in 0..open.n() {
            prop_assert!(open.degree(v) >= k);
        }
    }

    #[test]
    fn valid_fraction_drops_under_supergraph(
        g in graph_strategy(10),
        extra in prop::collection::vec((0usize..10, 0usize..10), 0..6),
        shots in shots_strategy(10, 20),
    ) {
        let n = g.n();
        let shots: Vec<Vec<bool>> = shots.into_iter().map(|s| s[..n].to_vec()).collect();
        let mut edges = g.edges().to_vec();
        edges.extend(extra.into_iter().filter(|&(a, b)| a < n && b < n && a != b));
        let sup = Graph::new(n, edges).unwrap();
        let set = ShotSet::new(shots).unwrap();
        let a = analyze(&set, &g, 1, Regime::ExactUdg).unwrap();
        let b = analyze(&set, &sup, 1, Regime::ExactUdg).unwrap();
        prop_assert!(b.valid_fraction <= a.valid_fraction);
        prop_assert!(a.near_valid_edge_fraction.unwrap() >= a.valid_fraction);
        prop_assert!(a.near_valid_weight_fraction.is_none());
    }

    #[test]
    fn best_ratio_grows_with_more_shots(
        g in graph_strategy(10),
        first in shots_strategy(10, 10),
        more in shots_strategy(10, 10),
    ) {
        let n = g.n();
        let cut = |v: Vec<Vec<bool>>| v.into_iter().map(|s| s[..n].to_vec()).collect::<Vec<_>>();
        let first = cut(first);
        let mut all = first.clone();
        all.extend(cut(more));
        let alpha = common::exhaustive(&g).alpha;
        let a = analyze(&ShotSet::new(first).unwrap(), &g, alpha, Regime::Embedded).unwrap();
        let b = analyze(&ShotSet::new(all).unwrap(), &g, alpha, Regime::Embedded).unwrap();
        prop_assert!(b.best_ratio >= a.best_ratio);
        prop_assert!(b.best_ratio <= 1.0);
    }

    #[test]
    fn detuning_is_monotone(n in 1usize..200, which in 0usize..5, steps in 10usize..200) {
        let spec = pulse_spec(n, PulseVariant::ALL[which]);
        spec.validate().unwrap();
        let mut prev = f64::NEG_INFINITY;
        for i in 0..=steps {
            let v = spec.detuning.value_at(spec.duration * i as f64 / steps as f64);
            prop_assert!(v >= prev - 1e-12);
            prev = v;
        }
    }
}
