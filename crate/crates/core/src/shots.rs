//! Scoring of measurement bitstrings against benchmark graphs.

use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::graph::{count_violations, Graph};
use crate::mis::solve_exact;

/// Bitstrings in register node order plus `#` header metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct ShotSet {
    n_atoms: usize,
    shots: Vec<Vec<bool>>,
    meta: Map<String, Value>,
}

impl ShotSet {
    pub fn new(shots: Vec<Vec<bool>>) -> Result<Self> {
        let n_atoms = shots.first().map(Vec::len).ok_or_else(|| Error::input("shot set is empty"))?;
        if let Some(s) = shots.iter().find(|s| s.len() != n_atoms) {
            return Err(Error::SizeMismatch {
                expected: n_atoms,
                actual: s.len(),
            });
        }
        Ok(ShotSet {
            n_atoms,
            shots,
            meta: Map::new(),
        })
    }

    pub fn from_bitstrings<S: AsRef<str>>(lines: &[S]) -> Result<Self> {
        ShotSet::new(lines.iter().map(|l| parse_bits(l.as_ref())).collect::<Result<_>>()?)
    }

    /// Parses the text format: `# key: value` headers, then one
    /// bitstring per line. Blank lines are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut meta = Map::new();
        let mut shots = Vec::new();
        for line in text.lines().map(str::trim) {
            if line.is_empty() {
                continue;
            }
            if let Some(h) = line.strip_prefix('#') {
                if let Some((k, v)) = h.split_once(':') {
                    meta.insert(k.trim().to_string(), Value::String(v.trim().to_string()));
                }
                continue;
            }
            shots.push(parse_bits(line)?);
        }
        let mut set = ShotSet::new(shots)?;
        if let Some(n) = meta.get("n_atoms").and_then(Value::as_str) {
            let declared: usize = n.parse().map_err(|_| Error::input(format!("bad n_atoms header {n:?}")))?;
            if declared != set.n_atoms {
                return Err(Error::SizeMismatch {
                    expected: declared,
                    actual: set.n_atoms,
                });
            }
        }
        set.meta = meta;
        Ok(set)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        ShotSet::parse(&fs::read_to_string(path)?)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.meta {
            let v = v.as_str().map_or_else(|| v.to_string(), str::to_string);
            out.push_str(&format!("# {k}: {v}\n"));
        }
        for s in &self.shots {
            out.push_str(&bits_to_string(s));
            out.push('\n');
        }
        out
    }

    pub fn with_meta(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.meta.insert(key.to_string(), value.into());
        self
    }

    pub fn n_atoms(&self) -> usize {
        self.n_atoms
    }

    pub fn len(&self) -> usize {
        self.shots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shots.is_empty()
    }

    pub fn shots(&self) -> &[Vec<bool>] {
        &self.shots
    }

    pub fn meta(&self) -> &Map<String, Value> {
        &self.meta
    }
}

fn parse_bits(s: &str) -> Result<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(Error::input(format!("invalid shot character {other:?}"))),
        })
        .collect()
}

pub fn bits_to_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

fn ones(bits: &[bool]) -> Vec<usize> {
    bits.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect()
}

/// Which near-valid indicator applies; the two are not interchangeable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// Hamming weight within one of alpha.
    Embedded,
    /// At most two violated benchmark edges.
    ExactUdg,
}

impl std::str::FromStr for Regime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "embedded" => Ok(Regime::Embedded),
            "exact_udg" | "exact-udg" => Ok(Regime::ExactUdg),
            other => Err(Error::input(format!("unknown regime {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShotReport {
    pub n_shots: usize,
    pub alpha: usize,
    pub regime: Regime,
    pub valid_fraction: f64,
    /// Largest valid shot over alpha; 0 without a valid shot.
    pub best_ratio: f64,
    pub near_valid_weight_fraction: Option<f64>,
    pub near_valid_edge_fraction: Option<f64>,
    /// `hamming_histogram[w]` = number of shots of weight `w`.
    pub hamming_histogram: Vec<usize>,
    pub best_shot: Option<String>,
    pub canonical_recovery: Option<Recovery>,
}

struct ShotScore {
    weight: usize,
    violations: usize,
}

fn check_fit(shots: &ShotSet, g: &Graph) -> Result<()> {
    if shots.n_atoms() != g.n() {
        return Err(Error::SizeMismatch {
            expected: g.n(),
            actual: shots.n_atoms(),
        });
    }
    Ok(())
}

pub fn analyze(shots: &ShotSet, benchmark: &Graph, alpha: usize, regime: Regime) -> Result<ShotReport> {
    check_fit(shots, benchmark)?;
    if alpha == 0 {
        return Err(Error::input("benchmark alpha must be >= 1"));
    }
    let scores: Vec<ShotScore> = shots
        .shots()
        .par_iter()
        .map(|s| {
            let set = ones(s);
            ShotScore {
                weight: set.len(),
                violations: count_violations(benchmark, &set).expect("indices in range"),
            }
        })
        .collect();
    let total = scores.len() as f64;
    let fraction = |pred: &dyn Fn(&ShotScore) -> bool| scores.iter().filter(|s| pred(s)).count() as f64 / total;

    let mut best: Option<usize> = None;
    for (i, s) in scores.iter().enumerate() {
        if s.violations == 0 && best.is_none_or(|b| s.weight > scores[b].weight) {
            best = Some(i);
        }
    }
    let mut hist = vec![0; shots.n_atoms() + 1];
    for s in &scores {
        hist[s.weight] += 1;
    }
    Ok(ShotReport {
        n_shots: scores.len(),
        alpha,
        regime,
        valid_fraction: fraction(&|s| s.violations == 0),
        best_ratio: best.map_or(0.0, |b| scores[b].weight as f64 / alpha as f64),
        near_valid_weight_fraction: (regime == Regime::Embedded).then(|| fraction(&|s| s.weight.abs_diff(alpha) <= 1)),
        near_valid_edge_fraction: (regime == Regime::ExactUdg).then(|| fraction(&|s| s.violations <= 2)),
        hamming_histogram: hist,
        best_shot: best.map(|b| bits_to_string(&shots.shots()[b])),
        canonical_recovery: None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecoveryMode {
    BackboneOverlap,
    LargestSubIs,
}

impl std::str::FromStr for RecoveryMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "backbone_overlap" => Ok(RecoveryMode::BackboneOverlap),
            "largest_sub_is" => Ok(RecoveryMode::LargestSubIs),
            other => Err(Error::input(format!("unknown recovery mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Recovery {
    pub mode: RecoveryMode,
    pub value: f64,
}

/// End-to-end recovery of the text backbone.
///
/// Shots are first filtered to those independent on `register_graph`
/// (skipped when `None`); each surviving 1-set is mapped through
/// `reg_to_text` and scored against `g_text`. The result is the best
/// score over `alpha_text`, 0 when no shot survives.
pub fn canonical_recovery(
    shots: &ShotSet,
    register_graph: Option<&Graph>,
    reg_to_text: &[usize],
    g_text: &Graph,
    alpha_text: usize,
    mode: RecoveryMode,
    reference: Option<&[usize]>,
) -> Result<Recovery> {
    if reg_to_text.len() != shots.n_atoms() {
        return Err(Error::SizeMismatch {
            expected: shots.n_atoms(),
            actual: reg_to_text.len(),
        });
    }
    let mut seen = vec![false; g_text.n()];
    for &t in reg_to_text {
        if t >= g_text.n() || std::mem::replace(&mut seen[t], true) {
            return Err(Error::input("register-to-text map must be injective into the text graph"));
        }
    }
    if alpha_text == 0 {
        return Err(Error::input("text alpha must be >= 1"));
    }
    if let Some(g) = register_graph {
        check_fit(shots, g)?;
    }
    let reference = match (mode, reference) {
        (RecoveryMode::BackboneOverlap, None) => {
            return Err(Error::input("backbone_overlap needs a reference backbone"));
        }
        (_, r) => r.map(|r| {
            let mut v = r.to_vec();
            v.sort_unstable();
            v
        }),
    };
    let best = shots
        .shots()
        .par_iter()
        .map(|s| -> Result<usize> {
            let set = ones(s);
            if let Some(g) = register_graph {
                if count_violations(g, &set)? > 0 {
                    return Ok(0);
                }
            }
            let mut mapped: Vec<usize> = set.iter().map(|&i| reg_to_text[i]).collect();
            mapped.sort_unstable();
            Ok(match mode {
                RecoveryMode::BackboneOverlap => {
                    let r = reference.as_ref().expect("checked above");
                    mapped.iter().filter(|v| r.binary_search(v).is_ok()).count()
                }
                RecoveryMode::LargestSubIs => solve_exact(&g_text.induced(&mapped)?, None).alpha,
            })
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .max()
        .unwrap_or(0);
    Ok(Recovery {
        mode,
        value: best as f64 / alpha_text as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c5_example() {
        let shots = ShotSet::from_bitstrings(&["10100", "11000", "00000"]).unwrap();
        let r = analyze(&shots, &Graph::cycle(5), 2, Regime::Embedded).unwrap();
        assert!((r.valid_fraction - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(r.best_ratio, 1.0);
        // weights 2, 2, 0 against alpha 2
        assert!((r.near_valid_weight_fraction.unwrap() - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(r.near_valid_edge_fraction, None);
        assert_eq!(r.hamming_histogram, vec![1, 0, 2, 0, 0, 0]);
        assert_eq!(r.best_shot.as_deref(), Some("10100"));

        let e = analyze(&shots, &Graph::cycle(5), 2, Regime::ExactUdg).unwrap();
        assert_eq!(e.near_valid_edge_fraction, Some(1.0));
        assert_eq!(e.near_valid_weight_fraction, None);
    }

    #[test]
    fn all_zero_shot() {
        let shots = ShotSet::from_bitstrings(&["0000"]).unwrap();
        let r = analyze(&shots, &Graph::path(4), 2, Regime::Embedded).unwrap();
        assert_eq!((r.valid_fraction, r.best_ratio), (1.0, 0.0));
    }

    #[test]
    fn input_errors() {
        let shots = ShotSet::from_bitstrings(&["000"]).unwrap();
        assert!(analyze(&shots, &Graph::path(4), 2, Regime::Embedded).is_err());
        assert!(analyze(&shots, &Graph::path(3), 0, Regime::Embedded).is_err());
        assert!(ShotSet::from_bitstrings(&["01", "011"]).is_err());
        assert!(ShotSet::from_bitstrings(&["012"]).is_err());
        assert!(ShotSet::parse("# n_atoms: 3\n").is_err());
    }

    #[test]
    fn text_format_round_trip() {
        let text = "# device: emulator\n# n_atoms: 3\n101\n\n010\n";
        let s = ShotSet::parse(text).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.meta()["device"], "emulator");
        assert_eq!(ShotSet::parse(&s.to_text()).unwrap(), s);
        assert!(ShotSet::parse("# n_atoms: 4\n101\n").is_err());
    }

    #[test]
    fn path_recovery_toy() {
        let shots = ShotSet::from_bitstrings(&["11001"]).unwrap();
        let p5 = Graph::path(5);
        let id: Vec<usize> = (0..5).collect();
        let backbone = [0, 2, 4];
        let o = canonical_recovery(&shots, None, &id, &p5, 3, RecoveryMode::BackboneOverlap, Some(&backbone)).unwrap();
        assert!((o.value - 2.0 / 3.0).abs() < 1e-12);
        let l = canonical_recovery(&shots, None, &id, &p5, 3, RecoveryMode::LargestSubIs, None).unwrap();
        assert!((l.value - 2.0 / 3.0).abs() < 1e-12);
        assert!(canonical_recovery(&shots, None, &id, &p5, 3, RecoveryMode::BackboneOverlap, None).is_err());
    }

    #[test]
    fn recovery_respects_register_validity() {
        let shots = ShotSet::from_bitstrings(&["10101", "00000"]).unwrap();
        let p5 = Graph::path(5);
        let id: Vec<usize> = (0..5).collect();
        let exact = canonical_recovery(&shots, Some(&Graph::edgeless(5)), &id, &p5, 3, RecoveryMode::LargestSubIs, None).unwrap();
        assert_eq!(exact.value, 1.0);
        let blocked = canonical_recovery(&shots, Some(&Graph::complete(5)), &id, &p5, 3, RecoveryMode::LargestSubIs, None).unwrap();
        assert_eq!(blocked.value, 0.0);
        assert!(canonical_recovery(&shots, None, &[0, 0, 1, 2, 3], &p5, 3, RecoveryMode::LargestSubIs, None).is_err());
    }
}
