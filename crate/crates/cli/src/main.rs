//! `backbone`: command-line front end for the backbone toolkit.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use backbone_core::register::{EmbedObjective, PulseVariant};
use backbone_core::shots::{RecoveryMode, Regime};
use backbone_core::textgraph::KnnMode;

#[derive(Debug, Parser)]
#[command(name = "backbone", version, about = "Structural backbones of text graphs as maximum independent sets")]
pub struct Cli {
    /// JSON pipeline config supplying defaults for flags that are not given.
    #[arg(long, global = true, env = "BACKBONE_CONFIG")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a cosine k-NN graph from a vector file (EMB1 or CSV).
    BuildGraph(BuildGraphArgs),
    /// Exact maximum independent set.
    Solve(SolveArgs),
    /// Enumerate maximum independent sets up to a cap.
    Enumerate(EnumerateArgs),
    /// Solve, enumerate and certify the persistent core.
    Rigidity(EnumerateArgs),
    /// Erdos-Renyi or configuration-model null ensemble.
    Nullmodel(NullArgs),
    /// k-center and facility-location baselines against a stored backbone.
    Baselines(BaselineArgs),
    /// Emit an engineered graph with coordinates, or list the families.
    Generate(GenerateArgs),
    /// Embed a graph onto an atom-register lattice by simulated annealing.
    EmbedRegister(EmbedArgs),
    /// Margin-constrained embeddings over a list of target margins.
    MarginSweep(SweepArgs),
    /// Write a pulse specification.
    PulseExport(PulseArgs),
    /// Score measurement bitstrings.
    AnalyzeShots(ShotArgs),
    /// Re-check stored artifacts.
    Verify(VerifyArgs),
    /// One CSV row per graph: N, |E|, density, alpha, rho, optima.
    Report(ReportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KnnModeArg {
    Union,
    Mutual,
}

impl From<KnnModeArg> for KnnMode {
    fn from(m: KnnModeArg) -> Self {
        match m {
            KnnModeArg::Union => KnnMode::Union,
            KnnModeArg::Mutual => KnnMode::Mutual,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum NullKind {
    Er,
    Config,
}

#[derive(Debug, Args)]
pub struct BuildGraphArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub k: Option<usize>,
    /// Union or mutual k-NN; required here or in the config.
    #[arg(long, value_enum)]
    pub mode: Option<KnnModeArg>,
    #[arg(long, allow_hyphen_values = true)]
    pub threshold: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Seconds; the report is marked inexact if the search is cut short.
    #[arg(long)]
    pub time_limit: Option<f64>,
    /// Include wall times (breaks byte-identical reruns).
    #[arg(long)]
    pub timings: bool,
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub cap: Option<usize>,
    #[arg(long)]
    pub time_limit: Option<f64>,
}

#[derive(Debug, Args)]
pub struct NullArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub model: NullKind,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub time_limit: Option<f64>,
}

#[derive(Debug, Args)]
pub struct BaselineArgs {
    /// Graph file.
    #[arg(long)]
    pub input: PathBuf,
    /// Solver report holding the backbone witness.
    #[arg(long)]
    pub backbone: PathBuf,
    /// Vector file for cosine similarities; hop distances otherwise.
    #[arg(long)]
    pub vectors: Option<PathBuf>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Family name (see --catalogue).
    #[arg(long, required_unless_present = "catalogue")]
    pub family: Option<String>,
    /// Print the family catalogue and exit.
    #[arg(long)]
    pub catalogue: bool,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub rows: Option<usize>,
    #[arg(long)]
    pub cols: Option<usize>,
    #[arg(long)]
    pub radius: Option<usize>,
    #[arg(long)]
    pub target_n: Option<usize>,
    #[arg(long)]
    pub hubs: Option<usize>,
    #[arg(long)]
    pub spokes: Option<usize>,
    #[arg(long)]
    pub arm_len: Option<usize>,
    #[arg(long)]
    pub depth: Option<usize>,
    #[arg(long)]
    pub count: Option<usize>,
    #[arg(long)]
    pub size: Option<usize>,
    #[arg(long)]
    pub left: Option<usize>,
    #[arg(long)]
    pub right: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Chords as `a-b` pairs, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub chords: Vec<String>,
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long)]
    pub backbone: Option<usize>,
    #[arg(long)]
    pub groups: Option<usize>,
    #[arg(long)]
    pub extra: Option<usize>,
    /// Only for randomized families.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Lattice spacing in micrometres.
    #[arg(long)]
    pub spacing: Option<f64>,
}

#[derive(Debug, Args)]
pub struct EmbedArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Embedding report (JSON).
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Register file; in ladder mode `.2d`, `.2l`, `.3d` are inserted
    /// before the extension.
    #[arg(long)]
    pub register: PathBuf,
    /// 2d, 2l, 3d or ladder.
    #[arg(long)]
    pub mode: String,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub iterations: Option<usize>,
    #[arg(long)]
    pub restarts: Option<usize>,
    /// Target blockade margin in units of r_b.
    #[arg(long)]
    pub margin: Option<f64>,
    #[arg(long, default_value = "recall")]
    pub objective: EmbedObjective,
    /// Do not seed a restart from the graph's own coordinates.
    #[arg(long)]
    pub ignore_coords: bool,
    /// Hardware profile JSON; violations fail the command.
    #[arg(long)]
    pub profile: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Ascending target margins, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub margins: Vec<f64>,
    #[arg(long, default_value = "2d")]
    pub mode: String,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub iterations: Option<usize>,
    #[arg(long)]
    pub restarts: Option<usize>,
}

#[derive(Debug, Args)]
pub struct PulseArgs {
    /// Atom count; taken from --register when omitted.
    #[arg(long, required_unless_present = "register")]
    pub atoms: Option<usize>,
    #[arg(long)]
    pub register: Option<PathBuf>,
    #[arg(long, default_value = "baseline")]
    pub variant: PulseVariant,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ShotArgs {
    /// Shots file.
    #[arg(long)]
    pub input: PathBuf,
    /// Benchmark graph the shots are scored against.
    #[arg(long)]
    pub graph: PathBuf,
    /// Benchmark alpha; solved exactly when omitted.
    #[arg(long)]
    pub alpha: Option<usize>,
    #[arg(long)]
    pub regime: Regime,
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Text graph for end-to-end recovery.
    #[arg(long)]
    pub text_graph: Option<PathBuf>,
    /// JSON array mapping atom index to text vertex; identity by default.
    #[arg(long)]
    pub map: Option<PathBuf>,
    /// Solver report on the text graph; its witness is the reference backbone.
    #[arg(long)]
    pub reference: Option<PathBuf>,
    #[arg(long, default_value = "backbone_overlap")]
    pub recovery_mode: RecoveryMode,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Graph file; its metadata density is checked.
    #[arg(long)]
    pub input: PathBuf,
    /// Solver report(s) on this graph.
    #[arg(long)]
    pub report: Vec<PathBuf>,
    #[arg(long, requires = "embedding")]
    pub register: Option<PathBuf>,
    /// Embedding report matching --register.
    #[arg(long, requires = "register")]
    pub embedding: Option<PathBuf>,
    #[arg(long)]
    pub profile: Option<PathBuf>,
    /// Warnings fail too.
    #[arg(long)]
    pub strict: bool,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Graph files, one row each.
    #[arg(long, required = true, num_args = 1..)]
    pub input: Vec<PathBuf>,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub cap: Option<usize>,
    #[arg(long)]
    pub time_limit: Option<f64>,
}

/// Bad flag combination: reported with exit code 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
