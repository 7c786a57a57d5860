//! Deterministic inputs shared by the benchmarks.

use backbone_core::textgraph::EmbeddingMatrix;

/// `n` unit-ish vectors of dimension `dim` from a fixed integer hash, so
/// every run sees the same data without an RNG dependency.
pub fn synthetic_vectors(n: usize, dim: usize) -> EmbeddingMatrix {
    let rows = (0..n)
        .map(|i| {
            (0..dim)
                .map(|j| {
                    let h = (i as u64).wrapping_mul(6364136223846793005) ^ (j as u64 + 1).wrapping_mul(1442695040888963407);
                    ((h >> 33) as f64 / (1u64 << 31) as f64) - 0.5
                })
                .collect()
        })
        .collect();
    EmbeddingMatrix::unlabeled(rows).expect("non-empty rows")
}
