//! Deterministic generators for engineered graph families.
//!
//! Geometric families carry coordinates (micrometres) and a realization
//! radius such that the unit-disk (or unit-ball) graph of the coordinates
//! at that radius is exactly the generated graph.

use std::collections::BTreeSet;
use std::f64::consts::{PI, SQRT_2};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{geometric_adjacency, Coords, Graph};

pub const DEFAULT_SPACING: f64 = 5.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    /// Grid with orthogonal and diagonal adjacency.
    King { rows: usize, cols: usize },
    /// Grid with Chebyshev distance <= 2 adjacency.
    ExtendedKing { rows: usize, cols: usize },
    /// Grid with Euclidean reach sqrt(5) (offsets (1,0), (1,1), (2,0), (2,1)).
    Sqrt5King { rows: usize, cols: usize },
    /// Hexagonal patch of a triangular lattice, `radius` rings around a centre.
    CenteredHex { radius: usize },
    /// Kagome (3.6.3.6) patch of `rows x cols` cells, optionally trimmed.
    Kagome {
        rows: usize,
        cols: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        target_n: Option<usize>,
    },
    /// Snub-square (3.3.4.3.4) patch of `rows x cols` cells, optionally trimmed.
    SnubSquare {
        rows: usize,
        cols: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        target_n: Option<usize>,
    },
    /// Orthogonal grid.
    PlanarGrid { rows: usize, cols: usize },
    /// Stars of radial arms (paths) around each hub.
    HubSpoke {
        hubs: usize,
        spokes: usize,
        arm_len: usize,
    },
    /// Sierpinski triangle points of the given depth, joined at one lattice
    /// step (unit-disk adjacency, so corners across wide holes also touch).
    Sierpinski { depth: usize },
    DisjointCliques { count: usize, size: usize },
    CompleteBipartite { left: usize, right: usize },
    /// Cycle on `n` vertices plus the listed chords.
    CycleChords {
        n: usize,
        #[serde(default)]
        chords: Vec<(usize, usize)>,
    },
    Hypercube { dim: usize },
    Dodecahedron,
    /// Two stacked king grids with blockade reach between layers.
    BilayerKing { rows: usize, cols: usize },
    /// Unique-MIS construction: `backbone` independent vertices dominate
    /// every other vertex at least twice.
    DoubleDomination {
        n: usize,
        backbone: usize,
        groups: usize,
        extra: usize,
        seed: u64,
    },
    Edgeless { n: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignSpec {
    #[serde(flatten)]
    pub family: Family,
    /// Lattice spacing in micrometres.
    #[serde(default = "default_spacing")]
    pub spacing: f64,
}

fn default_spacing() -> f64 {
    DEFAULT_SPACING
}

impl DesignSpec {
    pub fn new(family: Family) -> Self {
        DesignSpec {
            family,
            spacing: DEFAULT_SPACING,
        }
    }

    pub fn with_spacing(mut self, spacing: f64) -> Self {
        self.spacing = spacing;
        self
    }

    pub fn name(&self) -> &'static str {
        family_name(&self.family)
    }

    /// Realization radius for geometric families, `None` otherwise.
    pub fn radius(&self) -> Option<f64> {
        let a = self.spacing;
        let r = match self.family {
            Family::King { .. } => a * SQRT_2 + 0.01 * a,
            Family::ExtendedKing { .. } => 2.0 * SQRT_2 * a * (1.0 + 1e-3),
            Family::Sqrt5King { .. } => a * 5f64.sqrt() + 0.01 * a,
            Family::CenteredHex { .. }
            | Family::Kagome { .. }
            | Family::SnubSquare { .. }
            | Family::PlanarGrid { .. }
            | Family::HubSpoke { .. }
            | Family::Sierpinski { .. }
            | Family::DisjointCliques { .. }
            | Family::Dodecahedron => 1.01 * a,
            Family::BilayerKing { .. } => BILAYER_RADIUS * a,
            _ => return None,
        };
        Some(r)
    }
}

/// Layer gap and reach of the bilayer king family, in units of spacing.
/// At spacing 5 um these are the 3 um gap and 8 um blockade radius.
const BILAYER_GAP: f64 = 0.6;
const BILAYER_RADIUS: f64 = 1.6;

fn family_name(f: &Family) -> &'static str {
    match f {
        Family::King { .. } => "king",
        Family::ExtendedKing { .. } => "extended_king",
        Family::Sqrt5King { .. } => "sqrt5_king",
        Family::CenteredHex { .. } => "centered_hex",
        Family::Kagome { .. } => "kagome",
        Family::SnubSquare { .. } => "snub_square",
        Family::PlanarGrid { .. } => "planar_grid",
        Family::HubSpoke { .. } => "hub_spoke",
        Family::Sierpinski { .. } => "sierpinski",
        Family::DisjointCliques { .. } => "disjoint_cliques",
        Family::CompleteBipartite { .. } => "complete_bipartite",
        Family::CycleChords { .. } => "cycle_chords",
        Family::Hypercube { .. } => "hypercube",
        Family::Dodecahedron => "dodecahedron",
        Family::BilayerKing { .. } => "bilayer_king",
        Family::DoubleDomination { .. } => "double_domination",
        Family::Edgeless { .. } => "edgeless",
    }
}

/// One catalogue entry.
#[derive(Debug, Clone, Serialize)]
pub struct FamilyInfo {
    pub name: &'static str,
    pub params: &'static [&'static str],
    pub geometric: bool,
    pub description: &'static str,
}

pub fn catalogue() -> Vec<FamilyInfo> {
    let e = |name, params, geometric, description| FamilyInfo {
        name,
        params,
        geometric,
        description,
    };
    vec![
        e("king", &["rows", "cols"][..], true, "king grid (Chebyshev-1), unique MIS for odd sides"),
        e("extended_king", &["rows", "cols"], true, "Chebyshev <= 2 grid"),
        e("sqrt5_king", &["rows", "cols"], true, "grid with Euclidean reach sqrt(5)"),
        e("centered_hex", &["radius"], true, "centred hexagonal triangular-lattice patch"),
        e("kagome", &["rows", "cols", "target_n?"], true, "kagome 3.6.3.6 patch, trimmed to target_n"),
        e("snub_square", &["rows", "cols", "target_n?"], true, "snub-square 3.3.4.3.4 patch, trimmed to target_n"),
        e("planar_grid", &["rows", "cols"], true, "orthogonal grid"),
        e("hub_spoke", &["hubs", "spokes<=5", "arm_len"], true, "hub-and-spoke stars"),
        e("sierpinski", &["depth"], true, "Sierpinski triangle points at unit-disk reach"),
        e("disjoint_cliques", &["count", "size"], true, "disjoint cliques on small circles"),
        e("complete_bipartite", &["left", "right"], false, "complete bipartite K_{left,right}"),
        e("cycle_chords", &["n", "chords"], false, "cycle plus an explicit chord list"),
        e("hypercube", &["dim"], false, "hypercube Q_dim"),
        e("dodecahedron", &[], true, "regular dodecahedron (3D unit-ball graph)"),
        e("bilayer_king", &["rows", "cols"], true, "two stacked king grids (3D unit-ball graph)"),
        e("double_domination", &["n", "backbone", "groups", "extra", "seed"], false, "unique-MIS construction"),
        e("edgeless", &["n"], false, "no edges"),
    ]
}

fn grid_coords(rows: usize, cols: usize, a: f64) -> Coords {
    Coords::planar((0..rows).flat_map(|r| (0..cols).map(move |c| [c as f64 * a, r as f64 * a])))
}

fn need(cond: bool, msg: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::input(msg.to_owned()))
    }
}

/// Triangular-lattice position of axial coordinates `(q, r)`.
fn axial(q: f64, r: f64, a: f64) -> [f64; 2] {
    [a * (q + r / 2.0), a * r * 3f64.sqrt() / 2.0]
}

fn centered_hex_coords(radius: usize, a: f64) -> Coords {
    let r = radius as i64;
    let mut pts = Vec::new();
    for rr in -r..=r {
        for q in -r..=r {
            if (q + rr).abs() <= r {
                pts.push(axial(q as f64, rr as f64, a));
            }
        }
    }
    Coords::planar(pts)
}

fn kagome_coords(rows: usize, cols: usize, a: f64) -> Coords {
    let h = 3f64.sqrt() * a;
    let mut pts = Vec::new();
    for j in 0..rows {
        for i in 0..cols {
            let ox = 2.0 * a * i as f64 + a * j as f64;
            let oy = h * j as f64;
            pts.push([ox, oy]);
            pts.push([ox + a, oy]);
            pts.push([ox + a / 2.0, oy + h / 2.0]);
        }
    }
    Coords::planar(pts)
}

fn snub_square_coords(rows: usize, cols: usize, a: f64) -> Coords {
    // Squares of side `a` centred on a square lattice of pitch 2a cos 15,
    // rotated by +15 degrees; their corners are the tiling's vertices.
    let theta = PI / 12.0;
    let pitch = 2.0 * a * theta.cos();
    let half_diag = a / SQRT_2;
    let mut pts = Vec::new();
    for j in 0..rows {
        for i in 0..cols {
            let cx = pitch * i as f64;
            let cy = pitch * j as f64;
            for k in 0..4 {
                let phi = PI / 4.0 + theta + k as f64 * PI / 2.0;
                pts.push([cx + half_diag * phi.cos(), cy + half_diag * phi.sin()]);
            }
        }
    }
    Coords::planar(pts)
}

/// Removes lowest-degree vertices (highest index on ties) until `target`
/// vertices remain, keeping coordinates aligned.
fn trim_to(coords: Coords, radius: f64, target: Option<usize>) -> Result<Coords> {
    let Some(target) = target else {
        return Ok(coords);
    };
    need(target <= coords.len(), "target_n exceeds the patch size")?;
    let mut keep: Vec<[f64; 3]> = coords.points().to_vec();
    while keep.len() > target {
        let c = Coords::planar(keep.iter().map(|p| [p[0], p[1]]));
        let g = geometric_adjacency(&c, radius)?;
        let victim = (0..g.n())
            .min_by(|&x, &y| g.degree(x).cmp(&g.degree(y)).then(y.cmp(&x)))
            .expect("non-empty");
        keep.remove(victim);
    }
    Ok(Coords::planar(keep.into_iter().map(|p| [p[0], p[1]])))
}

fn sierpinski_coords(depth: usize, a: f64) -> Coords {
    fn rec(q: i64, r: i64, side: i64, out: &mut BTreeSet<(i64, i64)>) {
        if side == 1 {
            out.extend([(q, r), (q + 1, r), (q, r + 1)]);
            return;
        }
        let h = side / 2;
        rec(q, r, h, out);
        rec(q + h, r, h, out);
        rec(q, r + h, h, out);
    }
    let mut set = BTreeSet::new();
    rec(0, 0, 1 << depth, &mut set);
    let mut pts: Vec<(i64, i64)> = set.into_iter().collect();
    pts.sort_by_key(|&(q, r)| (r, q));
    Coords::planar(pts.into_iter().map(|(q, r)| axial(q as f64, r as f64, a)))
}

fn hub_spoke_coords(hubs: usize, spokes: usize, arm_len: usize, a: f64) -> Coords {
    let sep = a * (2 * arm_len + 3) as f64;
    let mut pts = Vec::new();
    for h in 0..hubs {
        let cx = sep * h as f64;
        pts.push([cx, 0.0]);
        for s in 0..spokes {
            let phi = PI / 2.0 + 2.0 * PI * s as f64 / spokes as f64;
            for t in 1..=arm_len {
                let d = a * t as f64;
                pts.push([cx + d * phi.cos(), d * phi.sin()]);
            }
        }
    }
    Coords::planar(pts)
}

fn clique_cluster_coords(count: usize, size: usize, a: f64) -> Coords {
    let per_row = (count as f64).sqrt().ceil().max(1.0) as usize;
    let ring = 0.4 * a;
    let mut pts = Vec::new();
    for c in 0..count {
        let cx = 3.0 * a * (c % per_row) as f64;
        let cy = 3.0 * a * (c / per_row) as f64;
        for k in 0..size {
            if size == 1 {
                pts.push([cx, cy]);
            } else {
                let phi = PI / 2.0 + 2.0 * PI * k as f64 / size as f64;
                pts.push([cx + ring * phi.cos(), cy + ring * phi.sin()]);
            }
        }
    }
    Coords::planar(pts)
}

fn dodecahedron_coords(a: f64) -> Coords {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let inv = 1.0 / phi;
    let mut pts = Vec::new();
    for x in [-1.0, 1.0] {
        for y in [-1.0, 1.0] {
            for z in [-1.0, 1.0] {
                pts.push([x, y, z]);
            }
        }
    }
    for s in [-1.0, 1.0] {
        for t in [-1.0, 1.0] {
            pts.push([0.0, s * inv, t * phi]);
            pts.push([s * inv, t * phi, 0.0]);
            pts.push([s * phi, 0.0, t * inv]);
        }
    }
    // native edge length is 2 / phi
    let scale = a * phi / 2.0;
    Coords::spatial(pts.into_iter().map(|p| p.map(|v| v * scale)))
}

fn bilayer_coords(rows: usize, cols: usize, a: f64) -> Coords {
    let gap = BILAYER_GAP * a;
    Coords::spatial((0..2).flat_map(move |layer| {
        (0..rows).flat_map(move |r| {
            (0..cols).map(move |c| [c as f64 * a, r as f64 * a, layer as f64 * gap])
        })
    }))
}

fn double_domination(n: usize, backbone: usize, groups: usize, extra: usize, seed: u64) -> Result<Graph> {
    need(backbone >= 2 && backbone < n, "double_domination needs 2 <= backbone < n")?;
    need(groups >= 1 && 2 * groups <= backbone, "double_domination needs 1 <= groups <= backbone/2")?;
    need(n - backbone >= groups, "double_domination needs at least one member per group")?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let others: Vec<usize> = (backbone..n).collect();
    let mut edges = Vec::new();
    // Members of group j form a clique and share the private backbone pair
    // (2j, 2j+1), so any independent choice X of non-backbone vertices
    // blocks at least 2|X| backbone vertices.
    for (j, chunk) in others
        .chunks(others.len().div_ceil(groups))
        .enumerate()
        .take(groups)
    {
        for (k, &u) in chunk.iter().enumerate() {
            edges.push((u, 2 * j));
            edges.push((u, 2 * j + 1));
            for &w in &chunk[k + 1..] {
                edges.push((u, w));
            }
        }
    }
    let pool: Vec<usize> = (0..backbone).collect();
    for &u in &others {
        for &b in pool.choose_multiple(&mut rng, extra.min(backbone)) {
            edges.push((u, b));
        }
    }
    Graph::new(n, edges)
}

fn hypercube(dim: usize) -> Result<Graph> {
    need(dim <= 16, "hypercube dimension must be <= 16")?;
    let n = 1usize << dim;
    let edges = (0..n).flat_map(|v| {
        (0..dim)
            .map(move |b| (v, v ^ (1 << b)))
            .filter(|&(v, w)| v < w)
    });
    Graph::new(n, edges)
}

/// Builds the graph for `spec`. Geometric families carry coordinates and a
/// `radius` metadata entry; all graphs record family, parameters, spacing
/// and density.
pub fn generate(spec: &DesignSpec) -> Result<Graph> {
    need(spec.spacing > 0.0 && spec.spacing.is_finite(), "spacing must be positive")?;
    let a = spec.spacing;
    let radius = spec.radius();
    let geometric = |coords: Coords| geometric_adjacency(&coords, radius.expect("geometric family"));
    let g = match &spec.family {
        &Family::King { rows, cols }
        | &Family::ExtendedKing { rows, cols }
        | &Family::Sqrt5King { rows, cols }
        | &Family::PlanarGrid { rows, cols } => {
            need(rows >= 1 && cols >= 1, "grid sides must be >= 1")?;
            geometric(grid_coords(rows, cols, a))?
        }
        &Family::CenteredHex { radius } => {
            need(radius >= 1, "hex radius must be >= 1")?;
            geometric(centered_hex_coords(radius, a))?
        }
        &Family::Kagome { rows, cols, target_n } => {
            need(rows >= 1 && cols >= 1, "kagome needs at least one cell")?;
            geometric(trim_to(kagome_coords(rows, cols, a), radius.unwrap(), target_n)?)?
        }
        &Family::SnubSquare { rows, cols, target_n } => {
            need(rows >= 1 && cols >= 1, "snub_square needs at least one cell")?;
            geometric(trim_to(snub_square_coords(rows, cols, a), radius.unwrap(), target_n)?)?
        }
        &Family::HubSpoke { hubs, spokes, arm_len } => {
            need(hubs >= 1, "hub_spoke needs a hub")?;
            need((1..=5).contains(&spokes), "hub_spoke supports 1..=5 spokes per hub")?;
            need(arm_len >= 1, "arm_len must be >= 1")?;
            geometric(hub_spoke_coords(hubs, spokes, arm_len, a))?
        }
        &Family::Sierpinski { depth } => {
            need(depth <= 8, "sierpinski depth must be <= 8")?;
            geometric(sierpinski_coords(depth, a))?
        }
        &Family::DisjointCliques { count, size } => {
            need(count >= 1 && size >= 1, "disjoint_cliques needs count, size >= 1")?;
            geometric(clique_cluster_coords(count, size, a))?
        }
        &Family::CompleteBipartite { left, right } => {
            need(left >= 1 && right >= 1, "both sides must be non-empty")?;
            Graph::new(
                left + right,
                (0..left).flat_map(|i| (left..left + right).map(move |j| (i, j))),
            )?
        }
        Family::CycleChords { n, chords } => {
            need(*n >= 3, "cycle needs n >= 3")?;
            let cycle = (0..*n).map(|i| (i, (i + 1) % n));
            Graph::new(*n, cycle.chain(chords.iter().copied()))?
        }
        &Family::Hypercube { dim } => hypercube(dim)?,
        Family::Dodecahedron => geometric(dodecahedron_coords(a))?,
        &Family::BilayerKing { rows, cols } => {
            need(rows >= 1 && cols >= 1, "grid sides must be >= 1")?;
            geometric(bilayer_coords(rows, cols, a))?
        }
        &Family::DoubleDomination {
            n,
            backbone,
            groups,
            extra,
            seed,
        } => double_domination(n, backbone, groups, extra, seed)?,
        &Family::Edgeless { n } => Graph::edgeless(n),
    };
    let params = serde_json::to_value(spec)?;
    let mut g = g
        .with_meta("family", spec.name())
        .with_meta("params", params)
        .with_meta("spacing", spec.spacing);
    if let Some(r) = radius {
        g.set_meta("radius", r);
    }
    let d = g.density().value();
    g.set_meta("density", d);
    Ok(g)
}

/// Closed-form independence number for families where one is known.
pub fn family_alpha_formula(spec: &DesignSpec) -> Option<usize> {
    match spec.family {
        Family::King { rows, cols } => Some(rows.div_ceil(2) * cols.div_ceil(2)),
        Family::PlanarGrid { rows, cols } => Some((rows * cols).div_ceil(2)),
        Family::DisjointCliques { count, .. } => Some(count),
        Family::CompleteBipartite { left, right } => Some(left.max(right)),
        Family::Hypercube { dim } => Some(if dim == 0 { 1 } else { 1 << (dim - 1) }),
        Family::Edgeless { n } => Some(n),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::udg_check;

    fn gen(f: Family) -> Graph {
        generate(&DesignSpec::new(f)).unwrap()
    }

    fn assert_exact_udg(g: &Graph) {
        let r = g.metadata()["radius"].as_f64().unwrap();
        let check = udg_check(g, g.coords().unwrap(), r).unwrap();
        assert_eq!(check.recall, 1.0);
        assert!(check.extra_edges.is_empty());
    }

    #[test]
    fn inventory_sizes() {
        let cases = [
            (Family::King { rows: 5, cols: 5 }, 25, 72),
            (Family::King { rows: 9, cols: 9 }, 81, 272),
            (Family::ExtendedKing { rows: 7, cols: 7 }, 49, 396),
            (Family::Sqrt5King { rows: 9, cols: 9 }, 81, 622),
            (Family::CenteredHex { radius: 3 }, 37, 90),
            (Family::CenteredHex { radius: 5 }, 91, 240),
            (Family::PlanarGrid { rows: 5, cols: 10 }, 50, 85),
            (Family::Dodecahedron, 20, 30),
            (Family::DisjointCliques { count: 17, size: 3 }, 51, 51),
            (Family::CompleteBipartite { left: 25, right: 25 }, 50, 625),
            (Family::Hypercube { dim: 4 }, 16, 32),
            (Family::BilayerKing { rows: 5, cols: 4 }, 40, 240),
        ];
        for (family, n, e) in cases {
            let g = gen(family.clone());
            assert_eq!((g.n(), g.edge_count()), (n, e), "{family:?}");
        }
    }

    #[test]
    fn geometric_families_round_trip() {
        let families = [
            Family::King { rows: 5, cols: 4 },
            Family::ExtendedKing { rows: 7, cols: 7 },
            Family::Sqrt5King { rows: 9, cols: 9 },
            Family::CenteredHex { radius: 3 },
            Family::Kagome { rows: 6, cols: 6, target_n: Some(100) },
            Family::SnubSquare { rows: 5, cols: 5, target_n: Some(100) },
            Family::PlanarGrid { rows: 5, cols: 10 },
            Family::HubSpoke { hubs: 2, spokes: 5, arm_len: 4 },
            Family::Sierpinski { depth: 3 },
            Family::DisjointCliques { count: 17, size: 3 },
            Family::Dodecahedron,
            Family::BilayerKing { rows: 5, cols: 4 },
        ];
        for f in families {
            assert_exact_udg(&gen(f));
        }
    }

    #[test]
    fn lattice_local_structure() {
        // interior kagome vertices have degree 4, snub-square vertices degree 5
        let k = gen(Family::Kagome { rows: 6, cols: 6, target_n: None });
        assert_eq!(k.max_degree(), 4);
        let s = gen(Family::SnubSquare { rows: 6, cols: 6, target_n: None });
        assert_eq!(s.max_degree(), 5);
        let trimmed = gen(Family::Kagome { rows: 6, cols: 6, target_n: Some(100) });
        assert_eq!(trimmed.n(), 100);
    }

    #[test]
    fn sierpinski_counts() {
        for depth in 0..5 {
            let g = gen(Family::Sierpinski { depth });
            let p = 3usize.pow(depth as u32);
            assert_eq!(g.n(), 3 * (p + 1) / 2);
            // gasket edges plus three corner edges across every hole wider than one step
            let holes = if depth == 0 { 0 } else { (p / 3 - 1) / 2 };
            assert_eq!(g.edge_count(), 3 * p + 3 * holes);
        }
    }

    #[test]
    fn bilayer_has_two_planes() {
        let g = gen(Family::BilayerKing { rows: 5, cols: 4 });
        let c = g.coords().unwrap();
        assert_eq!(c.dim(), 3);
        let zs: BTreeSet<u64> = c.points().iter().map(|p| p[2].to_bits()).collect();
        assert_eq!(zs.len(), 2);
    }

    #[test]
    fn invalid_params_rejected() {
        let bad = [
            Family::CenteredHex { radius: 0 },
            Family::King { rows: 0, cols: 3 },
            Family::HubSpoke { hubs: 1, spokes: 6, arm_len: 2 },
            Family::CycleChords { n: 2, chords: vec![] },
            Family::CycleChords { n: 5, chords: vec![(0, 9)] },
            Family::DoubleDomination { n: 10, backbone: 4, groups: 3, extra: 0, seed: 0 },
        ];
        for f in bad {
            assert!(generate(&DesignSpec::new(f.clone())).is_err(), "{f:?}");
        }
    }

    #[test]
    fn metadata_records_density_and_family() {
        let g = gen(Family::King { rows: 5, cols: 5 });
        assert_eq!(g.metadata()["family"], "king");
        assert_eq!(g.metadata()["density"].as_f64().unwrap(), 0.24);
        assert_eq!(g.metadata()["params"]["rows"], 5);
    }

    #[test]
    fn spec_json_shape() {
        let spec: DesignSpec =
            serde_json::from_str(r#"{"family":"centered_hex","radius":3}"#).unwrap();
        assert_eq!(spec.spacing, DEFAULT_SPACING);
        assert_eq!(spec.family, Family::CenteredHex { radius: 3 });
    }

    #[test]
    fn alpha_formulas() {
        let f = |fam| family_alpha_formula(&DesignSpec::new(fam));
        assert_eq!(f(Family::King { rows: 5, cols: 5 }), Some(9));
        assert_eq!(f(Family::DisjointCliques { count: 17, size: 3 }), Some(17));
        assert_eq!(f(Family::CompleteBipartite { left: 25, right: 25 }), Some(25));
        assert_eq!(f(Family::Hypercube { dim: 4 }), Some(8));
        assert_eq!(f(Family::Dodecahedron), None);
    }
}
