use std::hint::black_box;

use backbone_bench::synthetic_vectors;
use backbone_core::forge::{generate, DesignSpec, Family};
use backbone_core::mis::{certify_core, solve_exact};
use backbone_core::register::{sa_embed, EmbedConfig, EmbedMode};
use backbone_core::structure::random_regular;
use backbone_core::textgraph::{build_knn_graph, KnnConfig, KnnMode};
use criterion::{criterion_group, criterion_main, Criterion};

fn solver(c: &mut Criterion) {
    let king = generate(&DesignSpec::new(Family::King { rows: 7, cols: 7 })).unwrap();
    let regular = random_regular(60, 6, 1).unwrap();
    let mut group = c.benchmark_group("mis");
    group.bench_function("solve_king_7x7", |b| b.iter(|| solve_exact(black_box(&king), None)));
    group.bench_function("solve_regular_60_6", |b| b.iter(|| solve_exact(black_box(&regular), None)));
    let mis = solve_exact(&regular, None);
    group.sample_size(10);
    group.bench_function("certify_regular_60_6", |b| b.iter(|| certify_core(black_box(&regular), &mis, None).unwrap()));
    group.finish();
}

fn knn(c: &mut Criterion) {
    let vectors = synthetic_vectors(400, 384);
    let cfg = KnnConfig::new(8, KnnMode::Mutual).with_threshold(-1.0);
    c.bench_function("knn_400x384_k8", |b| b.iter(|| build_knn_graph(black_box(&vectors), &cfg).unwrap()));
}

fn embedding(c: &mut Criterion) {
    let g = random_regular(30, 8, 0).unwrap();
    let cfg = EmbedConfig {
        iterations: 5_000,
        restarts: 4,
        ..EmbedConfig::new(EmbedMode::Planar, 1)
    };
    let mut group = c.benchmark_group("register");
    group.sample_size(10);
    group.bench_function("sa_regular_30_8", |b| b.iter(|| sa_embed(black_box(&g), &cfg).unwrap()));
    group.finish();
}

criterion_group!(benches, solver, knn, embedding);
criterion_main!(benches);
