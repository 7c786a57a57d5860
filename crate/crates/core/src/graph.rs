//! Undirected simple graphs with optional geometry, the JSON graph file
//! format, and unit-disk / unit-ball adjacency checks.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};

/// Vertex positions in micrometres. Every point carries the same dimension
/// (2 or 3); 2D points are stored with `z = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Coords {
    dim: usize,
    points: Vec<[f64; 3]>,
}

impl Coords {
    pub fn planar(points: impl IntoIterator<Item = [f64; 2]>) -> Self {
        Coords {
            dim: 2,
            points: points.into_iter().map(|[x, y]| [x, y, 0.0]).collect(),
        }
    }

    pub fn spatial(points: impl IntoIterator<Item = [f64; 3]>) -> Self {
        Coords {
            dim: 3,
            points: points.into_iter().collect(),
        }
    }

    /// Builds coordinates from ragged rows, rejecting mixed dimensions.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.first().map_or(2, Vec::len);
        if dim != 2 && dim != 3 {
            return Err(Error::input(format!("coordinate dimension {dim} is not 2 or 3")));
        }
        let mut points = Vec::with_capacity(rows.len());
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::input(format!(
                    "mixed coordinate dimensions: point 0 has {dim}, point {i} has {}",
                    row.len()
                )));
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(Error::input(format!("point {i} has a non-finite coordinate")));
            }
            points.push([row[0], row[1], if dim == 3 { row[2] } else { 0.0 }]);
        }
        Ok(Coords { dim, points })
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.points.iter().map(|p| p[..self.dim].to_vec()).collect()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[[f64; 3]] {
        &self.points
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        dist(&self.points[i], &self.points[j])
    }

    /// Uniformly scales every coordinate about the origin.
    pub fn scaled(&self, factor: f64) -> Self {
        Coords {
            dim: self.dim,
            points: self
                .points
                .iter()
                .map(|p| [p[0] * factor, p[1] * factor, p[2] * factor])
                .collect(),
        }
    }

    pub fn centroid(&self) -> [f64; 3] {
        let n = self.points.len().max(1) as f64;
        let mut c = [0.0; 3];
        for p in &self.points {
            for k in 0..3 {
                c[k] += p[k];
            }
        }
        c.map(|v| v / n)
    }

    /// Translates the points so that their centroid is the origin.
    pub fn centered(&self) -> Self {
        let c = self.centroid();
        Coords {
            dim: self.dim,
            points: self
                .points
                .iter()
                .map(|p| [p[0] - c[0], p[1] - c[1], p[2] - c[2]])
                .collect(),
        }
    }
}

pub(crate) fn dist(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    let dx = a[0] - b[0];
    let dy = a[1] - b[1];
    let dz = a[2] - b[2];
    (dx * dx + dy * dy + dz * dz).sqrt()
}

/// An undirected simple graph on vertices `0..n`.
///
/// Edges are kept as `(min, max)` pairs in lexicographic order; adjacency
/// lists are derived once at construction.
#[derive(Debug, Clone)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
    labels: Option<Vec<String>>,
    coords: Option<Coords>,
    metadata: Map<String, Value>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.edges == other.edges
            && self.labels == other.labels
            && self.coords == other.coords
            && self.metadata == other.metadata
    }
}

impl Graph {
    /// Builds a graph, normalizing each pair to `(min, max)` and dropping
    /// duplicates. Self-loops and out-of-range indices are rejected.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::input(format!("edge ({a},{b}) out of range for n={n}")));
            }
            if a == b {
                return Err(Error::input(format!("self-loop at vertex {a}")));
            }
            set.insert((a.min(b), a.max(b)));
        }
        let edges: Vec<_> = set.into_iter().collect();
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in &edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Graph {
            n,
            edges,
            adj,
            labels: None,
            coords: None,
            metadata: Map::new(),
        })
    }

    pub fn edgeless(n: usize) -> Self {
        Graph::new(n, []).expect("edgeless graph is valid")
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)));
        Graph::new(n, edges).expect("complete graph is valid")
    }

    pub fn cycle(n: usize) -> Self {
        Graph::new(n, (0..n).map(|i| (i, (i + 1) % n))).expect("cycle is valid")
    }

    pub fn path(n: usize) -> Self {
        Graph::new(n, (1..n).map(|i| (i - 1, i))).expect("path is valid")
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::SizeMismatch {
                expected: self.n,
                actual: labels.len(),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn with_coords(mut self, coords: Coords) -> Result<Self> {
        if coords.len() != self.n {
            return Err(Error::SizeMismatch {
                expected: self.n,
                actual: coords.len(),
            });
        }
        self.coords = Some(coords);
        Ok(self)
    }

    pub fn with_meta(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.metadata.insert(key.to_owned(), value.into());
        self
    }

    pub fn set_meta(&mut self, key: &str, value: impl Into<Value>) {
        self.metadata.insert(key.to_owned(), value.into());
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a < self.n && self.adj[a].binary_search(&b).is_ok()
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn coords(&self) -> Option<&Coords> {
        self.coords.as_ref()
    }

    pub fn metadata(&self) -> &Map<String, Value> {
        &self.metadata
    }

    /// Pairs `(i, j)`, `i < j`, that are not edges.
    pub fn non_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |i| {
            (i + 1..self.n)
                .filter(move |&j| !self.has_edge(i, j))
                .map(move |j| (i, j))
        })
    }

    /// The subgraph induced by `vertices` (relabelled `0..len` in the given order).
    pub fn induced(&self, vertices: &[usize]) -> Result<Graph> {
        let mut index = vec![usize::MAX; self.n];
        for (k, &v) in vertices.iter().enumerate() {
            check_vertex(self.n, v)?;
            index[v] = k;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(a, b)| index[a] != usize::MAX && index[b] != usize::MAX)
            .map(|&(a, b)| (index[a], index[b]));
        Graph::new(vertices.len(), edges)
    }

    /// Removes vertex `v`; remaining vertices are renumbered in order.
    pub fn without_vertex(&self, v: usize) -> Result<Graph> {
        check_vertex(self.n, v)?;
        let keep: Vec<usize> = (0..self.n).filter(|&u| u != v).collect();
        self.induced(&keep)
    }

    /// Connected components as ascending vertex lists, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// All-pairs shortest-path hop counts; unreachable pairs get `n`.
    pub fn hop_distances(&self) -> Vec<Vec<f64>> {
        let mut out = vec![vec![self.n as f64; self.n]; self.n];
        for s in 0..self.n {
            let row = &mut out[s];
            row[s] = 0.0;
            let mut queue = std::collections::VecDeque::from([s]);
            let mut hops = vec![usize::MAX; self.n];
            hops[s] = 0;
            while let Some(u) = queue.pop_front() {
                for &w in &self.adj[u] {
                    if hops[w] == usize::MAX {
                        hops[w] = hops[u] + 1;
                        row[w] = hops[w] as f64;
                        queue.push_back(w);
                    }
                }
            }
        }
        out
    }

    pub fn density(&self) -> Density {
        density(self)
    }

    /// Reads a graph file (see [`GraphFile`]).
    pub fn load(path: impl AsRef<Path>) -> Result<Graph> {
        let text = fs::read_to_string(path)?;
        Graph::from_json(&text)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_json())?;
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Graph> {
        let file: GraphFile = serde_json::from_str(text)?;
        file.into_graph()
    }

    /// Canonical serialization: compact JSON with sorted edges and a trailing newline.
    pub fn to_json(&self) -> String {
        let file = GraphFile::from(self);
        let mut s = serde_json::to_string(&file).expect("graph serializes");
        s.push('\n');
        s
    }
}

pub(crate) fn check_vertex(n: usize, v: usize) -> Result<()> {
    if v >= n {
        Err(Error::input(format!("vertex {v} out of range for n={n}")))
    } else {
        Ok(())
    }
}

/// On-disk graph representation.
///
/// Field aliases accept the common alternative spellings used by other
/// explicit-edge-list exporters (`num_nodes`, `edge_list`, `positions`).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphFile {
    #[serde(alias = "num_nodes", alias = "N")]
    pub n: usize,
    #[serde(alias = "edge_list")]
    pub edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none", alias = "positions")]
    pub coords: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    pub metadata: Map<String, Value>,
}

impl GraphFile {
    pub fn into_graph(self) -> Result<Graph> {
        let mut g = Graph::new(self.n, self.edges.into_iter().map(|[a, b]| (a, b)))?;
        if let Some(labels) = self.labels {
            g = g.with_labels(labels)?;
        }
        if let Some(rows) = self.coords {
            g = g.with_coords(Coords::from_rows(&rows)?)?;
        }
        g.metadata = self.metadata;
        Ok(g)
    }
}

impl From<&Graph> for GraphFile {
    fn from(g: &Graph) -> Self {
        GraphFile {
            n: g.n,
            edges: g.edges.iter().map(|&(a, b)| [a, b]).collect(),
            labels: g.labels.clone(),
            coords: g.coords.as_ref().map(Coords::to_rows),
            metadata: g.metadata.clone(),
        }
    }
}

/// Edge density `2|E| / (N(N-1))`, zero below two vertices.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Density(pub f64);

impl Density {
    pub fn value(self) -> f64 {
        self.0
    }
}

pub fn density(g: &Graph) -> Density {
    let n = g.n();
    if n < 2 {
        return Density(0.0);
    }
    Density(2.0 * g.edge_count() as f64 / (n as f64 * (n as f64 - 1.0)))
}

/// True iff no edge of `g` has both endpoints in `set`.
pub fn is_independent_set(g: &Graph, set: &[usize]) -> Result<bool> {
    Ok(first_conflict(g, set)?.is_none())
}

/// The lexicographically first adjacent pair inside `set`, if any.
pub fn first_conflict(g: &Graph, set: &[usize]) -> Result<Option<(usize, usize)>> {
    let mut member = vec![false; g.n()];
    for &v in set {
        check_vertex(g.n(), v)?;
        member[v] = true;
    }
    let mut sorted: Vec<usize> = set.to_vec();
    sorted.sort_unstable();
    for &v in &sorted {
        if let Some(&w) = g.neighbors(v).iter().find(|&&w| w > v && member[w]) {
            return Ok(Some((v, w)));
        }
    }
    Ok(None)
}

/// Number of edges of `g` with both endpoints in `set`.
pub fn count_violations(g: &Graph, set: &[usize]) -> Result<usize> {
    let mut member = vec![false; g.n()];
    for &v in set {
        check_vertex(g.n(), v)?;
        member[v] = true;
    }
    Ok(g.edges()
        .iter()
        .filter(|&&(a, b)| member[a] && member[b])
        .count())
}

/// The unit-disk (2D) or unit-ball (3D) graph of `coords`: `(i, j)` is an
/// edge iff their distance is at most `radius`. No tolerance is applied.
pub fn geometric_adjacency(coords: &Coords, radius: f64) -> Result<Graph> {
    if coords.is_empty() {
        return Err(Error::input("no coordinates"));
    }
    if !(radius > 0.0) {
        return Err(Error::input(format!("radius must be positive, got {radius}")));
    }
    let n = coords.len();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if coords.distance(i, j) <= radius {
                edges.push((i, j));
            }
        }
    }
    Graph::new(n, edges)?.with_coords(coords.clone())
}

/// Comparison of a graph against the adjacency realized by a placement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UdgCheck {
    pub missing_edges: Vec<(usize, usize)>,
    pub extra_edges: Vec<(usize, usize)>,
    pub recall: f64,
}

impl UdgCheck {
    pub fn is_exact(&self) -> bool {
        self.missing_edges.is_empty() && self.extra_edges.is_empty()
    }
}

/// Reports which edges of `g` are not realized within `radius` and which
/// realized pairs are not edges of `g`.
pub fn udg_check(g: &Graph, coords: &Coords, radius: f64) -> Result<UdgCheck> {
    if coords.len() != g.n() {
        return Err(Error::SizeMismatch {
            expected: g.n(),
            actual: coords.len(),
        });
    }
    let mut missing = Vec::new();
    let mut extra = Vec::new();
    for i in 0..g.n() {
        for j in i + 1..g.n() {
            let close = coords.distance(i, j) <= radius;
            match (g.has_edge(i, j), close) {
                (true, false) => missing.push((i, j)),
                (false, true) => extra.push((i, j)),
                _ => {}
            }
        }
    }
    let recall = if g.edge_count() == 0 {
        1.0
    } else {
        1.0 - missing.len() as f64 / g.edge_count() as f64
    };
    Ok(UdgCheck {
        missing_edges: missing,
        extra_edges: extra,
        recall,
    })
}
