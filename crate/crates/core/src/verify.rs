//! Stored-artifact formats and the consistency checks run over them.

use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graph::{first_conflict, Graph};
use crate::mis::{rho, solve_exact, MisResult, OptimaEnumeration, RigidityReport};
use crate::register::{blockade_margin, edge_recall, EmbedMode, EmbedResult, Register, RestartScore};

/// Solver output as written to disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MisReport {
    pub n: usize,
    pub edges: usize,
    pub alpha: usize,
    pub witness: Vec<usize>,
    pub exact: bool,
    #[serde(default)]
    pub core: Option<Vec<usize>>,
    #[serde(default)]
    pub rho: Option<f64>,
    #[serde(default)]
    pub n_optima: Option<usize>,
    #[serde(default)]
    pub hit_cap: Option<bool>,
    #[serde(default)]
    pub certified: Option<bool>,
    /// Per-solve limit the numbers were produced under.
    #[serde(default)]
    pub time_limit_s: Option<f64>,
    /// Wall times in seconds; present only when requested, so reruns
    /// stay byte-identical by default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings: Option<serde_json::Map<String, serde_json::Value>>,
}

impl MisReport {
    pub fn from_solve(g: &Graph, mis: &MisResult, time_limit: Option<Duration>) -> Self {
        MisReport {
            n: g.n(),
            edges: g.edge_count(),
            alpha: mis.alpha,
            witness: mis.witness.clone(),
            exact: mis.exact,
            core: None,
            rho: None,
            n_optima: None,
            hit_cap: None,
            certified: None,
            time_limit_s: time_limit.map(|d| d.as_secs_f64()),
            timings: None,
        }
    }

    pub fn with_enumeration(mut self, optima: &OptimaEnumeration) -> Self {
        self.n_optima = Some(optima.solutions.len());
        self.hit_cap = Some(optima.hit_cap);
        self
    }

    pub fn with_rigidity(mut self, report: &RigidityReport) -> Self {
        self.core = Some(report.core.clone());
        self.rho = Some(report.rho);
        self.certified = Some(report.certified);
        if let Some(c) = report.n_optima {
            self.n_optima = Some(c.count);
            self.hit_cap = Some(c.lower_bound);
        }
        self
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Embedding output as written to disk, next to its register file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingReport {
    pub mode: EmbedMode,
    pub recall: f64,
    /// `None` when the target has no non-edges.
    pub margin: Option<f64>,
    pub missing_edges: Vec<(usize, usize)>,
    pub extra_edges: Vec<(usize, usize)>,
    pub best_restart: usize,
    pub restarts: Vec<RestartScore>,
}

impl From<&EmbedResult> for EmbeddingReport {
    fn from(r: &EmbedResult) -> Self {
        EmbeddingReport {
            mode: r.mode,
            recall: r.recall,
            margin: r.margin.is_finite().then_some(r.margin),
            missing_edges: r.missing_edges.clone(),
            extra_edges: r.extra_edges.clone(),
            best_restart: r.best_restart,
            restarts: r.restarts.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Severity {
    Error,
    /// Could not be checked; fatal only in strict mode.
    Warning,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Finding {
    pub check: String,
    pub severity: Severity,
    pub detail: String,
}

impl Finding {
    fn error(check: &str, detail: String) -> Self {
        Finding {
            check: check.to_string(),
            severity: Severity::Error,
            detail,
        }
    }

    fn warning(check: &str, detail: String) -> Self {
        Finding {
            check: check.to_string(),
            severity: Severity::Warning,
            detail,
        }
    }
}

/// True when nothing fails; in strict mode warnings fail too.
pub fn passes(findings: &[Finding], strict: bool) -> bool {
    findings
        .iter()
        .all(|f| f.severity == Severity::Warning && !strict)
}

/// Re-checks a stored solver report against its graph.
pub fn verify_mis_report(g: &Graph, report: &MisReport) -> Result<Vec<Finding>> {
    let mut out = Vec::new();
    if report.n != g.n() || report.edges != g.edge_count() {
        out.push(Finding::error(
            "graph_shape",
            format!(
                "report is for N={} E={}, graph has N={} E={}",
                report.n,
                report.edges,
                g.n(),
                g.edge_count()
            ),
        ));
        return Ok(out);
    }
    if let Some(&v) = report.witness.iter().find(|&&v| v >= g.n()) {
        out.push(Finding::error("witness_range", format!("vertex {v} out of range")));
        return Ok(out);
    }
    let mut sorted = report.witness.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != report.witness.len() {
        out.push(Finding::error("witness_duplicates", "witness repeats a vertex".into()));
    }
    if let Some((u, v)) = first_conflict(g, &sorted)? {
        out.push(Finding::error(
            "witness_independent",
            format!("witness contains adjacent vertices {u} and {v}"),
        ));
    }
    if sorted.len() != report.alpha {
        out.push(Finding::error(
            "witness_size",
            format!("witness has {} vertices, alpha is {}", sorted.len(), report.alpha),
        ));
    }

    let limit = report.time_limit_s.map(Duration::from_secs_f64);
    let fresh = solve_exact(g, limit);
    if !fresh.exact {
        out.push(Finding::warning(
            "alpha_fresh",
            format!("fresh solve did not finish within the stored limit (reached {})", fresh.alpha),
        ));
        if fresh.alpha > report.alpha {
            out.push(Finding::error(
                "alpha_fresh",
                format!("stored alpha {} but an independent set of size {} exists", report.alpha, fresh.alpha),
            ));
        }
    } else if fresh.alpha != report.alpha {
        out.push(Finding::error(
            "alpha_fresh",
            format!("stored alpha {} but a fresh solve gives {}", report.alpha, fresh.alpha),
        ));
    }
    if report.exact != fresh.exact && fresh.exact && fresh.alpha == report.alpha {
        // stored as inexact but the value is in fact optimal
        out.push(Finding::warning("exact_flag", "stored result is flagged inexact".into()));
    }

    if let Some(core) = &report.core {
        if let Some(v) = core.iter().find(|v| sorted.binary_search(v).is_err()) {
            out.push(Finding::error("core_in_witness", format!("core vertex {v} is not in the witness")));
        }
        if let Some(stored) = report.rho {
            let expected = rho(core.len(), report.alpha);
            if stored != expected {
                out.push(Finding::error(
                    "rho",
                    format!("stored rho {stored} but |core|/alpha = {expected}"),
                ));
            }
        }
    }
    if report.certified == Some(false) {
        out.push(Finding::warning("certified", "core is not certified".into()));
    }
    Ok(out)
}

/// Recomputes recall and margin from the stored register.
pub fn verify_embedding(target: &Graph, register: &Register, report: &EmbeddingReport) -> Result<Vec<Finding>> {
    let mut out = Vec::new();
    if register.n_nodes() != target.n() {
        out.push(Finding::error(
            "register_size",
            format!("register holds {} nodes, graph has {}", register.n_nodes(), target.n()),
        ));
        return Ok(out);
    }
    let recall = edge_recall(target, register)?;
    if recall != report.recall {
        out.push(Finding::error(
            "recall",
            format!("stored recall {} but the register gives {recall}", report.recall),
        ));
    }
    let margin = blockade_margin(register, target)?;
    let margin = margin.is_finite().then_some(margin);
    if margin != report.margin {
        out.push(Finding::error(
            "margin",
            format!("stored margin {:?} but the register gives {margin:?}", report.margin),
        ));
    }
    Ok(out)
}

/// Checks a recorded `density` against `2|E| / (N(N-1))`.
pub fn verify_graph_metadata(g: &Graph) -> Vec<Finding> {
    let expected = g.density().value();
    match g.metadata().get("density") {
        None => vec![Finding::warning("density", "graph metadata has no density".into())],
        Some(v) => match v.as_f64() {
            Some(d) if (d - expected).abs() <= 1e-12 => Vec::new(),
            _ => vec![Finding::error(
                "density",
                format!("metadata density {v} but 2|E|/(N(N-1)) = {expected}"),
            )],
        },
    }
}
