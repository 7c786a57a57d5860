//! One function per subcommand; each wraps a single library operation.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{anyhow, bail, Context, Result};
use serde::Serialize;
use serde_json::{json, Map, Value};

use backbone_core::forge::{catalogue, generate, DesignSpec};
use backbone_core::mis::{analyze_rigidity, enumerate_optima, solve_exact, DEFAULT_OPTIMA_CAP};
use backbone_core::register::{
    embed_ladder, hardware_validate, margin_sweep, pulse_spec, sa_embed, EmbedConfig, EmbedMode,
    HardwareProfile, Register,
};
use backbone_core::shots::{analyze, canonical_recovery, ShotSet};
use backbone_core::structure::{compare_baselines, config_null, er_null};
use backbone_core::textgraph::{build_knn_graph, cosine_matrix, EmbeddingMatrix, KnnConfig};
use backbone_core::verify::{
    passes, verify_embedding, verify_graph_metadata, verify_mis_report, EmbeddingReport, Finding,
    MisReport, Severity,
};
use backbone_core::Graph;

use crate::config::PipelineConfig;
use crate::{
    BaselineArgs, BuildGraphArgs, Cli, Command, EmbedArgs, EnumerateArgs, GenerateArgs, NullArgs,
    NullKind, PulseArgs, ReportArgs, ShotArgs, SolveArgs, SweepArgs, UsageError, VerifyArgs,
};

pub fn run(cli: Cli) -> Result<ExitCode> {
    let cfg = PipelineConfig::load(cli.config.as_deref())?;
    match cli.command {
        Command::BuildGraph(a) => build_graph(a, &cfg),
        Command::Solve(a) => solve(a, &cfg),
        Command::Enumerate(a) => enumerate(a, &cfg),
        Command::Rigidity(a) => rigidity(a, &cfg),
        Command::Nullmodel(a) => nullmodel(a, &cfg),
        Command::Baselines(a) => baselines(a),
        Command::Generate(a) => generate_cmd(a),
        Command::EmbedRegister(a) => embed(a, &cfg),
        Command::MarginSweep(a) => sweep(a, &cfg),
        Command::PulseExport(a) => pulse(a),
        Command::AnalyzeShots(a) => shots(a),
        Command::Verify(a) => verify(a, &cfg),
        Command::Report(a) => report(a, &cfg),
    }?;
    Ok(ExitCode::SUCCESS)
}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow!(UsageError(msg.into()))
}

fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pretty<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn load_graph(path: &Path) -> Result<Graph> {
    Graph::load(path).with_context(|| format!("loading graph {}", path.display()))
}

fn load_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn load_vectors(path: &Path) -> Result<EmbeddingMatrix> {
    let is_csv = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    let m = if is_csv {
        EmbeddingMatrix::from_csv(&std::fs::read_to_string(path)?)
    } else {
        EmbeddingMatrix::load(path)
    };
    m.with_context(|| format!("loading vectors {}", path.display()))
}

fn time_limit(flag: Option<f64>, cfg: &PipelineConfig) -> Result<Option<Duration>> {
    match flag.or(cfg.solver.time_limit_s) {
        None => Ok(None),
        Some(s) if s.is_finite() && s > 0.0 => Ok(Some(Duration::from_secs_f64(s))),
        Some(s) => Err(usage(format!("--time-limit must be positive, got {s}"))),
    }
}

fn cap(flag: Option<usize>, cfg: &PipelineConfig) -> Result<usize> {
    match flag.or(cfg.solver.cap).unwrap_or(DEFAULT_OPTIMA_CAP) {
        0 => Err(usage("--cap must be at least 1")),
        c => Ok(c),
    }
}

fn build_graph(a: BuildGraphArgs, cfg: &PipelineConfig) -> Result<()> {
    let k = a.k.or(cfg.knn.k).ok_or_else(|| usage("--k is required"))?;
    let mode = a
        .mode
        .or(cfg.knn.mode)
        .ok_or_else(|| usage("--mode union|mutual is required (no default)"))?;
    let mut knn = KnnConfig::new(k, mode.into());
    if let Some(t) = a.threshold.or(cfg.knn.threshold) {
        knn = knn.with_threshold(t);
    }
    let vectors = load_vectors(&a.input)?;
    let g = build_knn_graph(&vectors, &knn)?;
    emit(a.output.as_deref(), &g.to_json())
}

fn solve(a: SolveArgs, cfg: &PipelineConfig) -> Result<()> {
    let g = load_graph(&a.input)?;
    let limit = time_limit(a.time_limit, cfg)?;
    let mis = solve_exact(&g, limit);
    let mut report = MisReport::from_solve(&g, &mis, limit);
    if a.timings {
        let mut t = Map::new();
        t.insert("solve_s".into(), json!(mis.stats.elapsed.as_secs_f64()));
        report.timings = Some(t);
    }
    emit(a.output.as_deref(), &report.to_json())
}

fn enumerate(a: EnumerateArgs, cfg: &PipelineConfig) -> Result<()> {
    let g = load_graph(&a.input)?;
    let optima = enumerate_optima(&g, cap(a.cap, cfg)?, time_limit(a.time_limit, cfg)?);
    emit(a.output.as_deref(), &pretty(&optima)?)
}

fn rigidity(a: EnumerateArgs, cfg: &PipelineConfig) -> Result<()> {
    let g = load_graph(&a.input)?;
    let limit = time_limit(a.time_limit, cfg)?;
    let (mis, optima, rig) = analyze_rigidity(&g, cap(a.cap, cfg)?, limit)?;
    let report = MisReport::from_solve(&g, &mis, limit)
        .with_enumeration(&optima)
        .with_rigidity(&rig);
    emit(a.output.as_deref(), &report.to_json())
}

fn nullmodel(a: NullArgs, cfg: &PipelineConfig) -> Result<()> {
    let g = load_graph(&a.input)?;
    let limit = time_limit(a.time_limit, cfg)?;
    let stats = match a.model {
        NullKind::Er => er_null(&g, a.trials, a.seed, limit)?,
        NullKind::Config => config_null(&g, a.trials, a.seed, limit)?,
    };
    emit(a.output.as_deref(), &pretty(&stats)?)
}

fn baselines(a: BaselineArgs) -> Result<()> {
    let g = load_graph(&a.input)?;
    let backbone: MisReport = load_json(&a.backbone)?;
    let sim = match &a.vectors {
        Some(p) => {
            let e = load_vectors(p)?;
            if e.n_units() != g.n() {
                bail!("vector file has {} units, graph has {} vertices", e.n_units(), g.n());
            }
            Some(cosine_matrix(&e, true)?)
        }
        None => None,
    };
    let rows = compare_baselines(&g, &backbone.witness, sim.as_deref())?;
    let out = json!({
        "distance": if sim.is_some() { "cosine" } else { "hops" },
        "backbone": backbone.witness,
        "baselines": rows,
    });
    emit(a.output.as_deref(), &pretty(&out)?)
}

fn generate_cmd(a: GenerateArgs) -> Result<()> {
    if a.catalogue {
        return emit(a.output.as_deref(), &pretty(&catalogue())?);
    }
    let family = a.family.clone().ok_or_else(|| usage("--family is required"))?;
    let mut spec = Map::new();
    spec.insert("family".into(), json!(family));
    let params = [
        ("rows", a.rows),
        ("cols", a.cols),
        ("radius", a.radius),
        ("target_n", a.target_n),
        ("hubs", a.hubs),
        ("spokes", a.spokes),
        ("arm_len", a.arm_len),
        ("depth", a.depth),
        ("count", a.count),
        ("size", a.size),
        ("left", a.left),
        ("right", a.right),
        ("n", a.n),
        ("dim", a.dim),
        ("backbone", a.backbone),
        ("groups", a.groups),
        ("extra", a.extra),
    ];
    for (key, v) in params {
        if let Some(v) = v {
            spec.insert(key.into(), json!(v));
        }
    }
    if let Some(s) = a.seed {
        spec.insert("seed".into(), json!(s));
    }
    if let Some(s) = a.spacing {
        spec.insert("spacing".into(), json!(s));
    }
    if !a.chords.is_empty() {
        let chords = a
            .chords
            .iter()
            .map(|c| {
                let (x, y) = c.split_once('-').ok_or_else(|| usage(format!("chord {c:?} is not a-b")))?;
                let p = |s: &str| s.trim().parse::<usize>().map_err(|_| usage(format!("chord {c:?} is not a-b")));
                Ok(json!([p(x)?, p(y)?]))
            })
            .collect::<Result<Vec<_>>>()?;
        spec.insert("chords".into(), Value::Array(chords));
    }
    let spec: DesignSpec =
        serde_json::from_value(Value::Object(spec)).map_err(|e| usage(format!("family {family:?}: {e}")))?;
    let g = generate(&spec)?;
    emit(a.output.as_deref(), &g.to_json())
}

fn embed_config(mode: EmbedMode, seed: u64, iterations: Option<usize>, restarts: Option<usize>, cfg: &PipelineConfig) -> EmbedConfig {
    let mut c = EmbedConfig::new(mode, seed);
    let e = &cfg.embed;
    if let Some(v) = iterations.or(e.iterations) {
        c.iterations = v;
    }
    if let Some(v) = restarts.or(e.restarts) {
        c.restarts = v;
    }
    if let Some(v) = e.r_b {
        c.r_b = v;
    }
    if let Some(v) = e.field_radius {
        c.field_radius = v;
    }
    if let Some(v) = e.margin_weight {
        c.margin_weight = v;
    }
    c
}

fn parse_mode(s: &str) -> Result<EmbedMode> {
    s.parse().map_err(|e| usage(format!("{e}")))
}

/// `reg.json` -> `reg.2d.json`.
fn tagged(path: &Path, tag: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}.{tag}.{}", ext.to_string_lossy()),
        None => format!("{stem}.{tag}"),
    };
    path.with_file_name(name)
}

fn load_profile(flag: Option<&Path>, cfg: &PipelineConfig) -> Result<Option<HardwareProfile>> {
    match flag {
        Some(p) => Ok(Some(load_json(p)?)),
        None => Ok(cfg.profile),
    }
}

fn embed(a: EmbedArgs, cfg: &PipelineConfig) -> Result<()> {
    let ladder = a.mode == "ladder";
    let mode = if ladder { EmbedMode::Planar } else { parse_mode(&a.mode)? };
    let g = load_graph(&a.input)?;
    let mut c = embed_config(mode, a.seed, a.iterations, a.restarts, cfg);
    c.objective = a.objective;
    c.margin_target = a.margin;
    if !a.ignore_coords {
        c.initial_coords = g.coords().map(|xy| xy.centered());
    }
    let profile = load_profile(a.profile.as_deref(), cfg)?;
    let mut registers = Vec::new();
    if ladder {
        let res = embed_ladder(&g, &c)?;
        let mut out = Map::new();
        for (tag, r) in [("2d", &res.planar), ("2l", &res.bilayer), ("3d", &res.spatial)] {
            let path = tagged(&a.register, tag);
            r.register.save(&path).with_context(|| format!("writing {}", path.display()))?;
            out.insert(tag.into(), serde_json::to_value(EmbeddingReport::from(r))?);
            registers.push(r.register.clone());
        }
        emit(a.output.as_deref(), &pretty(&out)?)?;
    } else {
        let res = sa_embed(&g, &c)?;
        res.register
            .save(&a.register)
            .with_context(|| format!("writing {}", a.register.display()))?;
        emit(a.output.as_deref(), &pretty(&EmbeddingReport::from(&res))?)?;
        registers.push(res.register);
    }
    if let Some(p) = profile {
        let bad: Vec<_> = registers.iter().flat_map(|r| hardware_validate(r, &p)).collect();
        if !bad.is_empty() {
            bail!("register violates the hardware profile: {}", serde_json::to_string(&bad)?);
        }
    }
    Ok(())
}

fn sweep(a: SweepArgs, cfg: &PipelineConfig) -> Result<()> {
    let g = load_graph(&a.input)?;
    let mut c = embed_config(parse_mode(&a.mode)?, a.seed, a.iterations, a.restarts, cfg);
    c.initial_coords = g.coords().map(|xy| xy.centered());
    let rows = margin_sweep(&g, &a.margins, &c)?;
    emit(a.output.as_deref(), &pretty(&rows)?)
}

fn pulse(a: PulseArgs) -> Result<()> {
    let n = match (a.atoms, &a.register) {
        (Some(n), _) => n,
        (None, Some(p)) => Register::load(p).with_context(|| format!("loading register {}", p.display()))?.n_nodes(),
        (None, None) => return Err(usage("--atoms or --register is required")),
    };
    let spec = pulse_spec(n, a.variant);
    spec.validate()?;
    emit(a.output.as_deref(), &spec.to_json())
}

fn exact_alpha(g: &Graph) -> Result<usize> {
    let mis = solve_exact(g, None);
    Ok(mis.alpha)
}

fn shots(a: ShotArgs) -> Result<()> {
    let set = ShotSet::load(&a.input).with_context(|| format!("loading shots {}", a.input.display()))?;
    let g = load_graph(&a.graph)?;
    let alpha = match a.alpha {
        Some(v) => v,
        None => exact_alpha(&g)?,
    };
    let mut rep = analyze(&set, &g, alpha, a.regime)?;
    if let Some(tp) = &a.text_graph {
        let text = load_graph(tp)?;
        let map: Vec<usize> = match &a.map {
            Some(p) => load_json(p)?,
            None => (0..set.n_atoms()).collect(),
        };
        let reference: Option<MisReport> = a.reference.as_deref().map(load_json).transpose()?;
        let alpha_text = match &reference {
            Some(r) => r.alpha,
            None => exact_alpha(&text)?,
        };
        let rec = canonical_recovery(
            &set,
            Some(&g),
            &map,
            &text,
            alpha_text,
            a.recovery_mode,
            reference.as_ref().map(|r| r.witness.as_slice()),
        )?;
        rep.canonical_recovery = Some(rec);
    } else if a.reference.is_some() || a.map.is_some() {
        return Err(usage("--reference and --map need --text-graph"));
    }
    emit(a.output.as_deref(), &pretty(&rep)?)
}

#[derive(Serialize)]
struct Located {
    artifact: String,
    #[serde(flatten)]
    finding: Finding,
}

fn verify(a: VerifyArgs, cfg: &PipelineConfig) -> Result<()> {
    let g = load_graph(&a.input)?;
    let mut all: Vec<Located> = Vec::new();
    let mut push = |path: &Path, fs: Vec<Finding>| {
        all.extend(fs.into_iter().map(|finding| Located {
            artifact: path.display().to_string(),
            finding,
        }))
    };
    push(&a.input, verify_graph_metadata(&g));
    for p in &a.report {
        let r: MisReport = load_json(p)?;
        push(p, verify_mis_report(&g, &r)?);
    }
    if let (Some(rp), Some(ep)) = (&a.register, &a.embedding) {
        let reg = Register::load(rp).with_context(|| format!("loading register {}", rp.display()))?;
        let rep: EmbeddingReport = load_json(ep)?;
        push(ep, verify_embedding(&g, &reg, &rep)?);
        if let Some(profile) = load_profile(a.profile.as_deref(), cfg)? {
            let hw = hardware_validate(&reg, &profile)
                .into_iter()
                .map(|v| Finding {
                    check: "hardware".into(),
                    severity: Severity::Error,
                    detail: serde_json::to_string(&v).unwrap_or_default(),
                })
                .collect();
            push(rp, hw);
        }
    }
    let findings: Vec<Finding> = all.iter().map(|l| l.finding.clone()).collect();
    let ok = passes(&findings, a.strict);
    let out = json!({ "passed": ok, "strict": a.strict, "findings": all });
    emit(a.output.as_deref(), &pretty(&out)?)?;
    if !ok {
        for l in &all {
            eprintln!("violation [{}] {}: {}", l.artifact, l.finding.check, l.finding.detail);
        }
        bail!("verification failed with {} finding(s)", all.len());
    }
    Ok(())
}

#[derive(Serialize)]
struct ReportRow {
    graph: String,
    n: usize,
    edges: usize,
    density: f64,
    alpha: usize,
    rho: f64,
    n_optima: usize,
    optima_capped: bool,
    core_size: usize,
    certified: bool,
}

fn report(a: ReportArgs, cfg: &PipelineConfig) -> Result<()> {
    let cap = cap(a.cap, cfg)?;
    let limit = time_limit(a.time_limit, cfg)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    for p in &a.input {
        let g = load_graph(p)?;
        let (mis, _, rig) = analyze_rigidity(&g, cap, limit).with_context(|| format!("graph {}", p.display()))?;
        let count = rig.n_optima.expect("set by analyze_rigidity");
        w.serialize(ReportRow {
            graph: p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default(),
            n: g.n(),
            edges: g.edge_count(),
            density: g.density().value(),
            alpha: mis.alpha,
            rho: rig.rho,
            n_optima: count.count,
            optima_capped: count.lower_bound,
            core_size: rig.core.len(),
            certified: rig.certified,
        })?;
    }
    let bytes = w.into_inner().map_err(|e| anyhow!("{e}"))?;
    emit(a.output.as_deref(), &String::from_utf8(bytes)?)
}
