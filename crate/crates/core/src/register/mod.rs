//! Atom registers: placement metrics, hardware checks, simulated-annealing
//! embedding onto lattice sites, and exported pulse specifications.

mod anneal;
mod lattice;
mod pulse;

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Coords, Graph};

pub use anneal::{
    embed_ladder, margin_sweep, sa_embed, EmbedConfig, EmbedMode, EmbedObjective, EmbedResult,
    LadderResult,
    RestartInit, RestartScore, SweepRow,
};
pub use lattice::{LatticeSpec, SiteSet};
pub use pulse::{pulse_spec, ramp_duration, Envelope, PulseSpec, PulseVariant, Waveform, BASELINE_OMEGA, REDUCED_OMEGA};

/// Default blockade radius in micrometres.
pub const DEFAULT_RB: f64 = 8.0;

/// Physical atom positions plus the blockade radius they are read with.
#[derive(Debug, Clone, PartialEq)]
pub struct Register {
    coords: Coords,
    r_b: f64,
    /// `node_map[v]` is the coordinate index holding graph vertex `v`.
    node_map: Vec<usize>,
    lattice: serde_json::Value,
}

impl Register {
    pub fn new(coords: Coords, r_b: f64) -> Result<Self> {
        let n = coords.len();
        Register::with_map(coords, r_b, (0..n).collect(), serde_json::json!({"kind": "free"}))
    }

    pub fn with_map(coords: Coords, r_b: f64, node_map: Vec<usize>, lattice: serde_json::Value) -> Result<Self> {
        if !(r_b > 0.0 && r_b.is_finite()) {
            return Err(Error::input(format!("blockade radius must be positive, got {r_b}")));
        }
        let mut seen = vec![false; coords.len()];
        for &c in &node_map {
            if c >= coords.len() || std::mem::replace(&mut seen[c], true) {
                return Err(Error::input("node map must be injective into the coordinates"));
            }
        }
        Ok(Register {
            coords,
            r_b,
            node_map,
            lattice,
        })
    }

    /// Register from a graph's own coordinates.
    pub fn from_graph(g: &Graph, r_b: f64) -> Result<Self> {
        let coords = g
            .coords()
            .ok_or_else(|| Error::input("graph has no coordinates"))?
            .clone();
        Register::new(coords, r_b)
    }

    pub fn coords(&self) -> &Coords {
        &self.coords
    }

    pub fn r_b(&self) -> f64 {
        self.r_b
    }

    pub fn node_map(&self) -> &[usize] {
        &self.node_map
    }

    pub fn lattice(&self) -> &serde_json::Value {
        &self.lattice
    }

    pub fn n_nodes(&self) -> usize {
        self.node_map.len()
    }

    /// Distance between the atoms holding vertices `u` and `v`.
    pub fn distance(&self, u: usize, v: usize) -> f64 {
        self.coords.distance(self.node_map[u], self.node_map[v])
    }

    /// The graph the hardware realizes: vertex pairs within `r_b`.
    pub fn realized_graph(&self) -> Result<Graph> {
        let n = self.n_nodes();
        let edges = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .filter(|&(u, v)| self.distance(u, v) <= self.r_b);
        Graph::new(n, edges.collect::<Vec<_>>())
    }

    pub fn to_json(&self) -> String {
        let file = RegisterFile {
            coords: self.coords.to_rows(),
            r_b: self.r_b,
            node_map: self.node_map.clone(),
            lattice: self.lattice.clone(),
        };
        let mut s = serde_json::to_string(&file).expect("register serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: RegisterFile = serde_json::from_str(text)?;
        let coords = Coords::from_rows(&file.coords)?;
        let node_map = if file.node_map.is_empty() {
            (0..coords.len()).collect()
        } else {
            file.node_map
        };
        Register::with_map(coords, file.r_b, node_map, file.lattice)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Register::from_json(&fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_json())?;
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct RegisterFile {
    coords: Vec<Vec<f64>>,
    r_b: f64,
    #[serde(default)]
    node_map: Vec<usize>,
    #[serde(default)]
    lattice: serde_json::Value,
}

fn check_sizes(target: &Graph, reg: &Register) -> Result<()> {
    if target.n() != reg.n_nodes() {
        return Err(Error::SizeMismatch {
            expected: target.n(),
            actual: reg.n_nodes(),
        });
    }
    Ok(())
}

/// Target edges whose atoms are more than `r_b` apart.
pub fn missing_edges(target: &Graph, reg: &Register) -> Result<Vec<(usize, usize)>> {
    check_sizes(target, reg)?;
    Ok(target
        .edges()
        .iter()
        .copied()
        .filter(|&(u, v)| reg.distance(u, v) > reg.r_b())
        .collect())
}

/// Non-edges of the target whose atoms sit within `r_b`.
pub fn extra_edges(target: &Graph, reg: &Register) -> Result<Vec<(usize, usize)>> {
    check_sizes(target, reg)?;
    Ok(target
        .non_edges()
        .filter(|&(u, v)| reg.distance(u, v) <= reg.r_b())
        .collect())
}

/// Fraction of target edges realized within the blockade radius; 1 for an
/// edgeless target.
pub fn edge_recall(target: &Graph, reg: &Register) -> Result<f64> {
    let missing = missing_edges(target, reg)?.len();
    Ok(if target.edge_count() == 0 {
        1.0
    } else {
        1.0 - missing as f64 / target.edge_count() as f64
    })
}

/// Smallest non-edge distance over `r_b`; infinite for a complete target.
pub fn blockade_margin(reg: &Register, target: &Graph) -> Result<f64> {
    check_sizes(target, reg)?;
    let nnn = target
        .non_edges()
        .map(|(u, v)| reg.distance(u, v))
        .fold(f64::INFINITY, f64::min);
    Ok(nnn / reg.r_b())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HardwareProfile {
    pub max_atoms: usize,
    /// Maximum distance of any atom from the register centroid, um.
    pub fov_radius: f64,
    pub min_spacing: f64,
}

impl Default for HardwareProfile {
    fn default() -> Self {
        HardwareProfile {
            max_atoms: 100,
            fov_radius: 46.0,
            min_spacing: 5.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    TooManyAtoms { count: usize, max: usize },
    OutsideFieldOfView { atom: usize, radius: f64, max: f64 },
    TooClose { a: usize, b: usize, distance: f64, min: f64 },
}

/// Hardware constraint check; an empty list means the register is valid.
/// Distances are compared with a 1e-9 um tolerance to absorb rounding in
/// lattice coordinates.
pub fn hardware_validate(reg: &Register, profile: &HardwareProfile) -> Vec<Violation> {
    const TOL: f64 = 1e-9;
    let coords = reg.coords();
    let mut out = Vec::new();
    if coords.len() > profile.max_atoms {
        out.push(Violation::TooManyAtoms {
            count: coords.len(),
            max: profile.max_atoms,
        });
    }
    let c = coords.centroid();
    for (i, p) in coords.points().iter().enumerate() {
        let r = crate::graph::dist(p, &c);
        if r > profile.fov_radius + TOL {
            out.push(Violation::OutsideFieldOfView {
                atom: i,
                radius: r,
                max: profile.fov_radius,
            });
        }
    }
    for i in 0..coords.len() {
        for j in i + 1..coords.len() {
            let d = coords.distance(i, j);
            if d < profile.min_spacing - TOL {
                out.push(Violation::TooClose {
                    a: i,
                    b: j,
                    distance: d,
                    min: profile.min_spacing,
                });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(rows: usize, cols: usize, a: f64) -> Coords {
        Coords::planar((0..rows).flat_map(|r| (0..cols).map(move |c| [c as f64 * a, r as f64 * a])))
    }

    #[test]
    fn king_register_metrics() {
        let reg = Register::new(grid(5, 5, 5.0), 8.0).unwrap();
        let king = reg.realized_graph().unwrap();
        assert_eq!(king.edge_count(), 72);
        assert_eq!(edge_recall(&king, &reg).unwrap(), 1.0);
        assert_eq!(blockade_margin(&reg, &king).unwrap(), 1.25);
        assert!(hardware_validate(&reg, &HardwareProfile::default()).is_empty());
    }

    #[test]
    fn collinear_far_atoms_lose_every_edge() {
        let reg = Register::new(grid(1, 4, 9.0), 8.0).unwrap();
        assert_eq!(edge_recall(&Graph::complete(4), &reg).unwrap(), 0.0);
        assert_eq!(edge_recall(&Graph::edgeless(4), &reg).unwrap(), 1.0);
        assert!(edge_recall(&Graph::edgeless(3), &reg).is_err());
    }

    #[test]
    fn half_recall_by_hand() {
        // square of side 5: edges 0-1 and 2-3 are within 8, 0-3 (diagonal
        // 7.07) too, but 1-2 is placed 10 apart
        let c = Coords::planar([[0.0, 0.0], [5.0, 0.0], [-5.0, 0.0], [-10.0, 0.0]]);
        let reg = Register::new(c, 8.0).unwrap();
        let g = Graph::new(4, [(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        assert_eq!(edge_recall(&g, &reg).unwrap(), 0.5);
        assert_eq!(missing_edges(&g, &reg).unwrap(), vec![(0, 3), (1, 2)]);
    }

    #[test]
    fn margin_conventions() {
        let reg = Register::new(grid(1, 3, 5.0), 8.0).unwrap();
        assert_eq!(blockade_margin(&reg, &Graph::complete(3)).unwrap(), f64::INFINITY);
        assert!(blockade_margin(&reg, &Graph::edgeless(2)).is_err());
        // a non-edge inside the blockade radius gives margin < 1
        assert!(blockade_margin(&reg, &Graph::new(3, [(0, 1)]).unwrap()).unwrap() < 1.0);
    }

    #[test]
    fn hardware_violations() {
        let close = Register::new(Coords::planar([[0.0, 0.0], [4.0, 0.0]]), 8.0).unwrap();
        let v = hardware_validate(&close, &HardwareProfile::default());
        assert!(matches!(v.as_slice(), [Violation::TooClose { a: 0, b: 1, .. }]));

        let many = Register::new(grid(1, 101, 0.5), 8.0).unwrap();
        let v = hardware_validate(
            &many,
            &HardwareProfile {
                min_spacing: 0.1,
                fov_radius: 1000.0,
                ..HardwareProfile::default()
            },
        );
        assert_eq!(v, vec![Violation::TooManyAtoms { count: 101, max: 100 }]);

        let wide = Register::new(Coords::planar([[0.0, 0.0], [100.0, 0.0]]), 8.0).unwrap();
        assert_eq!(hardware_validate(&wide, &HardwareProfile::default()).len(), 2);
    }

    #[test]
    fn register_json_round_trip() {
        let reg = Register::with_map(
            grid(1, 3, 5.0),
            8.0,
            vec![2, 0, 1],
            serde_json::json!({"kind": "square", "spacing": 5.0}),
        )
        .unwrap();
        let text = reg.to_json();
        assert_eq!(Register::from_json(&text).unwrap(), reg);
        assert!(Register::with_map(grid(1, 2, 5.0), 8.0, vec![0, 0], serde_json::Value::Null).is_err());
    }
}
