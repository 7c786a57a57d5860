use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::graph::dist;

/// In-plane site pattern for the embedder.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LatticeSpec {
    Triangular { spacing: f64 },
    Square { spacing: f64 },
    /// Caller-supplied sites, used as-is in every mode.
    Explicit { sites: Vec<[f64; 3]> },
}

impl LatticeSpec {
    pub fn spacing(&self) -> Option<f64> {
        match *self {
            LatticeSpec::Triangular { spacing } | LatticeSpec::Square { spacing } => Some(spacing),
            LatticeSpec::Explicit { .. } => None,
        }
    }

    fn plane(&self, field_radius: f64) -> Vec<[f64; 2]> {
        let (a, tri) = match *self {
            LatticeSpec::Triangular { spacing } => (spacing, true),
            LatticeSpec::Square { spacing } => (spacing, false),
            LatticeSpec::Explicit { .. } => unreachable!("explicit sites have no plane"),
        };
        let row_h = if tri { a * 3f64.sqrt() / 2.0 } else { a };
        let reach = (field_radius / row_h).ceil() as i64 + 1;
        let mut pts = Vec::new();
        for j in -reach..=reach {
            for i in -2 * reach..=2 * reach {
                let x = if tri { a * (i as f64 + j as f64 / 2.0) } else { a * i as f64 };
                let y = row_h * j as f64;
                if (x * x + y * y).sqrt() <= field_radius + 1e-9 {
                    pts.push([x, y]);
                }
            }
        }
        pts
    }
}

/// The discrete positions an embedding may occupy.
#[derive(Debug, Clone)]
pub struct SiteSet {
    pub(crate) sites: Vec<[f64; 3]>,
    pub(crate) description: serde_json::Value,
}

impl SiteSet {
    /// Sites in the stacked planes `zs`, each plane being the lattice
    /// pattern clipped to a disk of `field_radius` around the origin.
    pub fn stacked(spec: &LatticeSpec, field_radius: f64, zs: &[f64]) -> SiteSet {
        match spec {
            LatticeSpec::Explicit { sites } => SiteSet {
                sites: sites.clone(),
                description: json!({"kind": "explicit", "sites": sites.len()}),
            },
            _ => {
                let plane = spec.plane(field_radius);
                let sites = zs
                    .iter()
                    .flat_map(|&z| plane.iter().map(move |p| [p[0], p[1], z]))
                    .collect();
                let kind = if matches!(spec, LatticeSpec::Triangular { .. }) {
                    "triangular"
                } else {
                    "square"
                };
                SiteSet {
                    sites,
                    description: json!({
                        "kind": kind,
                        "spacing": spec.spacing(),
                        "field_radius": field_radius,
                        "planes": zs,
                    }),
                }
            }
        }
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn site(&self, i: usize) -> [f64; 3] {
        self.sites[i]
    }

    /// Closest unoccupied site to `p` (lowest index on ties).
    pub fn nearest_free(&self, p: &[f64; 3], occupied: &[bool]) -> Option<usize> {
        self.sites
            .iter()
            .enumerate()
            .filter(|(i, _)| !occupied[*i])
            .min_by(|(i, a), (j, b)| dist(a, p).total_cmp(&dist(b, p)).then(i.cmp(j)))
            .map(|(i, _)| i)
    }
}
