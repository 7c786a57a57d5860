//! Semantic k-NN graphs from unit embeddings.
//!
//! Vector files are little-endian binary: the magic `EMB1`, `u32` unit
//! count, `u32` dimension, `n * dim` row-major `f32` values, then a UTF-8
//! JSON trailer `{"labels": [...], ...}` running to end of file.

use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::graph::Graph;

pub const MAGIC: &[u8; 4] = b"EMB1";
pub const DEFAULT_THRESHOLD: f64 = 0.78;

/// `n_units x dim` matrix of unit embeddings with one label per row.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingMatrix {
    dim: usize,
    data: Vec<f64>,
    labels: Vec<String>,
    meta: Map<String, Value>,
}

impl EmbeddingMatrix {
    pub fn new(rows: Vec<Vec<f64>>, labels: Vec<String>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::input("embedding matrix needs at least one row"));
        }
        if labels.len() != rows.len() {
            return Err(Error::SizeMismatch {
                expected: rows.len(),
                actual: labels.len(),
            });
        }
        let dim = rows[0].len();
        if dim == 0 {
            return Err(Error::input("embedding dimension is zero"));
        }
        let mut data = Vec::with_capacity(rows.len() * dim);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != dim {
                return Err(Error::input(format!("row {i} has length {}, expected {dim}", row.len())));
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(Error::input(format!("row {i} has a non-finite entry")));
            }
            data.extend(row);
        }
        Ok(EmbeddingMatrix {
            dim,
            data,
            labels,
            meta: Map::new(),
        })
    }

    /// Rows labelled `0..n` by index.
    pub fn unlabeled(rows: Vec<Vec<f64>>) -> Result<Self> {
        let labels = (0..rows.len()).map(|i| i.to_string()).collect();
        EmbeddingMatrix::new(rows, labels)
    }

    pub fn n_units(&self) -> usize {
        self.labels.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Extra trailer fields (model id, instruction, ...).
    pub fn meta(&self) -> &Map<String, Value> {
        &self.meta
    }

    pub fn with_meta(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.meta.insert(key.to_owned(), value.into());
        self
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(12 + self.data.len() * 4);
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&(self.n_units() as u32).to_le_bytes());
        out.extend_from_slice(&(self.dim as u32).to_le_bytes());
        for &v in &self.data {
            out.extend_from_slice(&(v as f32).to_le_bytes());
        }
        let mut trailer = self.meta.clone();
        trailer.insert("labels".into(), json!(self.labels));
        out.extend(serde_json::to_vec(&trailer).expect("trailer serializes"));
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < 12 || &bytes[..4] != MAGIC {
            return Err(Error::input("not an EMB1 vector file"));
        }
        let word = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().unwrap()) as usize;
        let (n, dim) = (word(4), word(8));
        let body = n
            .checked_mul(dim)
            .and_then(|c| c.checked_mul(4))
            .ok_or_else(|| Error::input("vector file header overflows"))?;
        if bytes.len() < 12 + body {
            return Err(Error::input("vector file truncated"));
        }
        let rows: Vec<Vec<f64>> = bytes[12..12 + body]
            .chunks_exact(4 * dim.max(1))
            .map(|row| {
                row.chunks_exact(4)
                    .map(|b| f32::from_le_bytes(b.try_into().unwrap()) as f64)
                    .collect()
            })
            .collect();
        let mut trailer: Map<String, Value> = serde_json::from_slice(&bytes[12 + body..])?;
        let labels = match trailer.remove("labels") {
            Some(v) => serde_json::from_value(v)?,
            None => (0..n).map(|i| i.to_string()).collect(),
        };
        let mut m = EmbeddingMatrix::new(rows, labels)?;
        m.meta = trailer;
        Ok(m)
    }

    /// Reads either an EMB1 file or, for `.csv` paths, rows of
    /// `label,v1,v2,...` (no header).
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
            return Self::from_csv(&fs::read_to_string(path)?);
        }
        Self::from_bytes(&fs::read(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_bytes())?;
        Ok(())
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for (line, record) in reader.records().enumerate() {
            let record = record.map_err(|e| Error::input(format!("csv line {}: {e}", line + 1)))?;
            let mut fields = record.iter();
            labels.push(fields.next().unwrap_or_default().to_owned());
            let row = fields
                .map(|f| {
                    f.parse::<f64>()
                        .map_err(|e| Error::input(format!("csv line {}: {e}", line + 1)))
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        EmbeddingMatrix::new(rows, labels)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KnnMode {
    /// Edge when either endpoint lists the other among its k neighbours.
    Union,
    /// Edge only when both endpoints list each other.
    Mutual,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KnnConfig {
    pub k: usize,
    pub threshold: f64,
    pub mode: KnnMode,
    pub normalize: bool,
}

impl KnnConfig {
    pub fn new(k: usize, mode: KnnMode) -> Self {
        KnnConfig {
            k,
            threshold: DEFAULT_THRESHOLD,
            mode,
            normalize: true,
        }
    }

    pub fn with_threshold(mut self, t: f64) -> Self {
        self.threshold = t;
        self
    }

    pub fn validate(&self, n_units: usize) -> Result<()> {
        if self.k == 0 || self.k >= n_units {
            return Err(Error::input(format!(
                "k must satisfy 1 <= k < n_units ({n_units}), got {}",
                self.k
            )));
        }
        if !(-1.0..=1.0).contains(&self.threshold) {
            return Err(Error::input(format!("threshold {} outside [-1, 1]", self.threshold)));
        }
        Ok(())
    }
}

/// Pairwise cosine similarities in double precision.
///
/// With `normalize` each row is divided by its norm (zero rows are an
/// error) and the diagonal is exactly 1; without it, raw dot products are
/// returned. Rows are computed in parallel and the lower triangle mirrors
/// the upper one, so the result is exactly symmetric.
pub fn cosine_matrix(e: &EmbeddingMatrix, normalize: bool) -> Result<Vec<Vec<f64>>> {
    let n = e.n_units();
    let norms: Vec<f64> = (0..n)
        .map(|i| e.row(i).iter().map(|v| v * v).sum::<f64>().sqrt())
        .collect();
    if normalize {
        if let Some(i) = norms.iter().position(|&v| v == 0.0) {
            return Err(Error::input(format!("row {i} has zero norm")));
        }
    }
    let mut s: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut row = vec![0.0; n];
            for j in i..n {
                let dot: f64 = e.row(i).iter().zip(e.row(j)).map(|(a, b)| a * b).sum();
                row[j] = if !normalize {
                    dot
                } else if i == j {
                    1.0
                } else {
                    dot / (norms[i] * norms[j])
                };
            }
            row
        })
        .collect();
    for i in 1..n {
        let (upper, lower) = s.split_at_mut(i);
        for (j, row) in upper.iter().enumerate() {
            lower[0][j] = row[i];
        }
    }
    Ok(s)
}

/// The `k` most similar other rows of each row; ties go to the lower index.
pub fn neighbor_lists(sim: &[Vec<f64>], k: usize) -> Vec<Vec<usize>> {
    sim.par_iter()
        .enumerate()
        .map(|(i, row)| {
            let mut others: Vec<usize> = (0..row.len()).filter(|&j| j != i).collect();
            others.sort_by(|&a, &b| row[b].total_cmp(&row[a]).then(a.cmp(&b)));
            others.truncate(k);
            others
        })
        .collect()
}

/// Builds the cosine k-NN graph. Candidate edges come from the neighbour
/// lists (union or mutual); the similarity threshold then filters them.
pub fn build_knn_graph(e: &EmbeddingMatrix, cfg: &KnnConfig) -> Result<Graph> {
    let n = e.n_units();
    cfg.validate(n)?;
    let sim = cosine_matrix(e, cfg.normalize)?;
    let lists = neighbor_lists(&sim, cfg.k);
    let mut listed = vec![vec![false; n]; n];
    for (i, list) in lists.iter().enumerate() {
        for &j in list {
            listed[i][j] = true;
        }
    }
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let candidate = match cfg.mode {
                KnnMode::Union => listed[i][j] || listed[j][i],
                KnnMode::Mutual => listed[i][j] && listed[j][i],
            };
            if candidate && sim[i][j] >= cfg.threshold {
                edges.push((i, j));
            }
        }
    }
    let mut g = Graph::new(n, edges)?
        .with_labels(e.labels().to_vec())?
        .with_meta("source", "knn")
        .with_meta("knn", serde_json::to_value(cfg)?)
        .with_meta("threshold_applied", "after_knn");
    if let Some(model) = e.meta().get("model_id") {
        g.set_meta("model_id", model.clone());
    }
    let d = g.density().value();
    g.set_meta("density", d);
    Ok(g)
}
