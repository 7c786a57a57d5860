//! Optional pipeline configuration: defaults that command-line flags override.

use std::path::Path;

use anyhow::Context;
use backbone_core::register::HardwareProfile;
use serde::Deserialize;

use crate::KnnModeArg;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub knn: KnnSettings,
    pub solver: SolverSettings,
    pub embed: EmbedSettings,
    pub profile: Option<HardwareProfile>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KnnSettings {
    pub k: Option<usize>,
    pub mode: Option<KnnModeArg>,
    pub threshold: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverSettings {
    pub time_limit_s: Option<f64>,
    pub cap: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EmbedSettings {
    pub iterations: Option<usize>,
    pub restarts: Option<usize>,
    pub r_b: Option<f64>,
    pub field_radius: Option<f64>,
    pub margin_weight: Option<f64>,
}

impl PipelineConfig {
    pub fn load(path: Option<&Path>) -> anyhow::Result<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }
}
