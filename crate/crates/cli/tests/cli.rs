//! End-to-end runs of the `backbone` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use backbone_core::textgraph::EmbeddingMatrix;
use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_backbone"));
    c.env_remove("BACKBONE_CONFIG");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn ok(args: &[&str]) -> Output {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn p(dir: &Path, name: &str) -> String {
    dir.join(name).to_string_lossy().into_owned()
}

fn read_json(path: &str) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn king(dir: &Path, rows: usize, cols: usize) -> String {
    let path = p(dir, &format!("king{rows}x{cols}.json"));
    ok(&["generate", "--family", "king", "--rows", &rows.to_string(), "--cols", &cols.to_string(), "--output", &path]);
    path
}

#[test]
fn generated_king_solves_to_nine() {
    let dir = tempfile::tempdir().unwrap();
    let g = king(dir.path(), 5, 5);
    let out = ok(&["solve", "--input", &g]);
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["alpha"], 9);
    assert_eq!(report["exact"], true);
    assert!(report.get("timings").is_none());
}

#[test]
fn tampered_witness_is_named() {
    let dir = tempfile::tempdir().unwrap();
    let g = king(dir.path(), 5, 5);
    let rep = p(dir.path(), "rig.json");
    ok(&["rigidity", "--input", &g, "--output", &rep]);
    ok(&["verify", "--input", &g, "--report", &rep, "--strict"]);

    let mut r = read_json(&rep);
    let w0 = r["witness"][0].as_u64().unwrap();
    r["witness"][0] = Value::from(w0 ^ 1);
    let bad = p(dir.path(), "bad.json");
    std::fs::write(&bad, serde_json::to_string_pretty(&r).unwrap()).unwrap();
    let out = run(&["verify", "--input", &g, "--report", &bad]);
    assert_eq!(code(&out), 1);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("violation"), "{stderr}");
    assert!(stderr.contains("witness_independent") || stderr.contains("core_in_witness"), "{stderr}");
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let g = king(dir.path(), 4, 4);
    let vec_path = p(dir.path(), "v.emb");
    let rows: Vec<Vec<f64>> = (0..12)
        .map(|i| {
            let a = i as f64 * 0.4;
            vec![a.cos(), a.sin(), 0.1 * i as f64]
        })
        .collect();
    EmbeddingMatrix::unlabeled(rows).unwrap().save(&vec_path).unwrap();

    let cases: Vec<Vec<String>> = vec![
        vec!["build-graph", "--input", &vec_path, "--k", "3", "--mode", "mutual"],
        vec!["solve", "--input", &g],
        vec!["rigidity", "--input", &g],
        vec!["enumerate", "--input", &g, "--cap", "50"],
        vec!["nullmodel", "--input", &g, "--model", "config", "--trials", "8", "--seed", "3"],
        vec!["nullmodel", "--input", &g, "--model", "er", "--trials", "8", "--seed", "3"],
        vec!["margin-sweep", "--input", &g, "--margins", "1.0,1.3", "--seed", "5", "--iterations", "1500", "--restarts", "2"],
        vec!["pulse-export", "--atoms", "50", "--variant", "four_knot"],
        vec!["report", "--input", &g],
    ]
    .into_iter()
    .map(|v| v.into_iter().map(String::from).collect())
    .collect();
    for args in &cases {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let a = ok(&args).stdout;
        let b = ok(&args).stdout;
        assert!(!a.is_empty(), "{args:?}");
        assert_eq!(a, b, "{args:?}");
    }

    let emb = |tag: &str| {
        let reg = p(dir.path(), &format!("reg{tag}.json"));
        let rep = p(dir.path(), &format!("emb{tag}.json"));
        ok(&["embed-register", "--input", &g, "--mode", "2l", "--seed", "9", "--iterations", "1500", "--restarts", "3", "--register", &reg, "--output", &rep]);
        (std::fs::read(reg).unwrap(), std::fs::read(rep).unwrap())
    };
    assert_eq!(emb("a"), emb("b"));
}

#[test]
fn strict_verify_passes_on_emitted_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let g = king(dir.path(), 3, 3);
    let solve = p(dir.path(), "solve.json");
    let rig = p(dir.path(), "rig.json");
    ok(&["solve", "--input", &g, "--output", &solve]);
    ok(&["rigidity", "--input", &g, "--output", &rig]);
    let reg = p(dir.path(), "reg.json");
    let emb = p(dir.path(), "emb.json");
    ok(&["embed-register", "--input", &g, "--mode", "2d", "--seed", "1", "--iterations", "1000", "--restarts", "2", "--register", &reg, "--output", &emb]);
    assert_eq!(read_json(&emb)["recall"], 1.0);
    let profile = p(dir.path(), "profile.json");
    std::fs::write(&profile, r#"{"max_atoms": 100, "fov_radius": 46.0, "min_spacing": 5.0}"#).unwrap();
    let out = ok(&[
        "verify", "--input", &g, "--report", &solve, "--report", &rig, "--register", &reg, "--embedding", &emb,
        "--profile", &profile, "--strict",
    ]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["passed"], true);

    let mut lied = read_json(&emb);
    lied["recall"] = Value::from(0.5);
    std::fs::write(&emb, lied.to_string()).unwrap();
    let out = run(&["verify", "--input", &g, "--register", &reg, "--embedding", &emb]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("recall"));
}

#[test]
fn ladder_writes_three_registers() {
    let dir = tempfile::tempdir().unwrap();
    let g = p(dir.path(), "c.json");
    ok(&["generate", "--family", "cycle_chords", "--n", "8", "--chords", "0-4,2-6", "--output", &g]);
    let reg = p(dir.path(), "r.json");
    let out = ok(&["embed-register", "--input", &g, "--mode", "ladder", "--seed", "2", "--iterations", "1000", "--restarts", "2", "--register", &reg]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    for tag in ["2d", "2l", "3d"] {
        assert!(dir.path().join(format!("r.{tag}.json")).exists());
        assert!(v[tag]["recall"].as_f64().unwrap() >= v["2d"]["recall"].as_f64().unwrap());
    }
}

#[test]
fn shots_with_recovery() {
    let dir = tempfile::tempdir().unwrap();
    let g = p(dir.path(), "c5.json");
    ok(&["generate", "--family", "cycle_chords", "--n", "5", "--output", &g]);
    let shots = p(dir.path(), "s.txt");
    std::fs::write(&shots, "# n_atoms: 5\n10100\n11000\n00000\n").unwrap();
    let rep = p(dir.path(), "solve.json");
    ok(&["solve", "--input", &g, "--output", &rep]);
    let out = ok(&[
        "analyze-shots", "--input", &shots, "--graph", &g, "--regime", "embedded", "--text-graph", &g, "--reference", &rep,
    ]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["alpha"], 2);
    assert!((v["valid_fraction"].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-12);
    assert!((v["near_valid_weight_fraction"].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-12);
    assert_eq!(v["canonical_recovery"]["mode"], "backbone_overlap");
}

#[test]
fn report_has_one_row_per_graph() {
    let dir = tempfile::tempdir().unwrap();
    let k = king(dir.path(), 5, 5);
    let dc = p(dir.path(), "dc.json");
    ok(&["generate", "--family", "disjoint_cliques", "--count", "17", "--size", "3", "--output", &dc]);
    let out = ok(&["report", "--input", &k, &dc]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[0].starts_with("graph,n,edges,density,alpha,rho,n_optima"));
    assert!(lines[1].starts_with("king5x5,25,72,0.24,9,1.0,1,false"), "{}", lines[1]);
    assert!(lines[2].starts_with("dc,51,51,"), "{}", lines[2]);
    assert!(lines[2].contains(",17,0.0,500,true,"), "{}", lines[2]);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let g = king(dir.path(), 3, 3);
    // stochastic command without --seed
    assert_eq!(code(&run(&["nullmodel", "--input", &g, "--model", "er"])), 2);
    assert_eq!(code(&run(&["embed-register", "--input", &g, "--mode", "2d", "--register", "x.json"])), 2);
    assert_eq!(code(&run(&["embed-register", "--input", &g, "--mode", "4d", "--seed", "1", "--register", "x.json"])), 2);
    assert_eq!(code(&run(&["generate", "--family", "king", "--rows", "3"])), 2);
    assert_eq!(code(&run(&["no-such-command"])), 2);
    // domain errors
    let garbage = p(dir.path(), "garbage.json");
    std::fs::write(&garbage, "{\"n\": 3, \"edges\": [[0, 7]]}").unwrap();
    assert_eq!(code(&run(&["solve", "--input", &garbage])), 1);
    assert_eq!(code(&run(&["solve", "--input", &p(dir.path(), "missing.json")])), 1);
    assert_eq!(code(&run(&["margin-sweep", "--input", &g, "--margins", "1.3,1.0", "--seed", "1"])), 1);
    assert_eq!(code(&run(&["--help"])), 0);
}

#[test]
fn knn_mode_has_no_silent_default() {
    let dir = tempfile::tempdir().unwrap();
    let v = p(dir.path(), "v.csv");
    std::fs::write(&v, "a,1,0\nb,0.9,0.1\nc,0,1\nd,0.1,0.9\n").unwrap();
    assert_eq!(code(&run(&["build-graph", "--input", &v, "--k", "1"])), 2);

    let cfg: PathBuf = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"knn": {"k": 1, "mode": "union", "threshold": -1.0}}"#).unwrap();
    let out = bin().args(["build-graph", "--input", &v]).env("BACKBONE_CONFIG", &cfg).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let g: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(g["n"], 4);
    assert_eq!(g["edges"].as_array().unwrap().len(), 2);
}
