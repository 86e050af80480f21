use std::path::PathBuf;
use std::process::Command;

use hecke_gl3::cli::{run, EXIT_CURVE, EXIT_OK, EXIT_UNSUPPORTED, EXIT_USAGE, EXIT_VERIFY};
use hecke_gl3::heckegraph::HeckeGraph;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("hecke-gl3").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn golden() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden/ss2_homology.json")
}

#[test]
fn exit_codes() {
    assert_eq!(call(&["curve-info", "--preset", "ss2"]).0, EXIT_OK);
    assert_eq!(call(&["building", "--p", "3"]).0, EXIT_OK);

    let (code, _, err) = call(&["curve-info", "--p", "2"]);
    assert_eq!(code, EXIT_CURVE);
    assert!(err.starts_with("error: invalid-curve:"), "{err}");
    assert_eq!(err.lines().count(), 1);
    assert_eq!(call(&["curve-info", "--p", "4", "--a3", "1"]).0, EXIT_CURVE);

    // ℓ dividing q − 1 and ℓ = p
    assert_eq!(call(&["homology", "--preset", "ss3", "--ell", "2"]).0, EXIT_UNSUPPORTED);
    assert_eq!(call(&["homology", "--preset", "ss3", "--ell", "3"]).0, EXIT_UNSUPPORTED);
    assert_eq!(call(&["building", "--p", "17"]).0, EXIT_UNSUPPORTED);

    assert_eq!(call(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(call(&["homology", "--preset", "ss2", "--p", "2"]).0, EXIT_USAGE);
    assert_eq!(call(&["--help"]).0, EXIT_OK);
}

#[test]
fn reports_are_byte_identical_across_runs() {
    for args in [
        &["homology", "--preset", "ss2", "--rational", "--ell", "3", "--format", "json"][..],
        &["hecke-graph", "--preset", "ss3", "--format", "json"],
        &["verify", "--preset", "ss3", "--ell", "5"],
        &["gl2", "--preset", "ss2", "--ell", "3"],
    ] {
        let a = call(args);
        let b = call(args);
        assert_eq!(a.0, EXIT_OK, "{args:?}: {}", a.2);
        assert_eq!(a, b);
    }
}

#[test]
fn graph_json_round_trips_through_cli() {
    for preset in ["ss2", "ss3"] {
        let (code, text, _) = call(&["hecke-graph", "--preset", preset, "--format", "json"]);
        assert_eq!(code, EXIT_OK);
        let g = HeckeGraph::from_json(&text).unwrap();
        assert_eq!(g.to_json(), text.trim_end());
    }
}

#[test]
fn golden_report_matches() {
    let path = golden();
    let (code, text, err) = call(&["verify", "--preset", "ss2", "--rational", "--ell", "3", "--ell", "7", "--golden", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK, "{text}{err}");
    assert!(text.contains("golden: match"));

    let (code, json, _) = call(&["homology", "--preset", "ss2", "--rational", "--ell", "3", "--ell", "7", "--format", "json"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(json, std::fs::read_to_string(&path).unwrap());
}

#[test]
fn corrupted_golden_fails() {
    let original = std::fs::read_to_string(golden()).unwrap();
    let corrupted = original.replacen("\"value\": 8", "\"value\": 9", 1);
    assert_ne!(corrupted, original);
    let path = std::env::temp_dir().join(format!("hecke-gl3-golden-{}.json", std::process::id()));
    std::fs::write(&path, corrupted).unwrap();
    let (code, text, _) = call(&["verify", "--preset", "ss2", "--rational", "--ell", "3", "--ell", "7", "--golden", path.to_str().unwrap()]);
    std::fs::remove_file(&path).unwrap();
    assert_eq!(code, EXIT_VERIFY);
    assert!(text.contains("MISMATCH"));
}

#[test]
fn stamp_is_opt_in() {
    let (_, plain, _) = call(&["homology", "--preset", "ss2", "--format", "json"]);
    let (_, stamped, _) = call(&["homology", "--preset", "ss2", "--format", "json", "--stamp"]);
    assert!(!plain.contains("\"stamp\""));
    assert!(stamped.contains("\"stamp\": \"unix:"));
}

fn check_dot(s: &str, kind: &str) {
    assert!(s.starts_with(&format!("{kind} ")), "{s}");
    assert!(s.trim_end().ends_with('}'));
    assert_eq!(s.matches('{').count(), s.matches('}').count());
    assert_eq!(s.matches('"').count() % 2, 0);
    for line in s.lines().skip(1) {
        let l = line.trim();
        assert!(l == "}" || l.ends_with(';'), "{l}");
    }
}

#[test]
fn dot_output_is_well_formed() {
    let (code, graph, _) = call(&["hecke-graph", "--preset", "ss2", "--format", "dot"]);
    assert_eq!(code, EXIT_OK);
    check_dot(&graph, "graph");
    // |Sym² E(F₂)| = (N₁² + N₂) / 2 with N₁ = 3, N₂ = 9
    assert_eq!(graph.matches(" -- ").count(), 9);
    let (code, building, _) = call(&["building", "--p", "2", "--format", "dot"]);
    assert_eq!(code, EXIT_OK);
    check_dot(&building, "graph");
    assert_eq!(building.matches(" -- ").count(), 21);
    assert_eq!(call(&["homology", "--preset", "ss2", "--format", "dot"]).0, EXIT_USAGE);
}

#[test]
fn sweep_over_f2() {
    let (code, text, err) = call(&["verify", "--all-curves", "--p", "2", "--ell", "3", "--format", "json"]);
    assert_eq!(code, EXIT_OK, "{err}");
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["smooth"].as_u64().unwrap() + v["singular"].as_u64().unwrap(), 32);
    assert_eq!(v["passed"], true);
    assert_eq!(call(&["verify", "--all-curves", "--p", "5"]).0, EXIT_UNSUPPORTED);
}

#[test]
fn binary_writes_out_file() {
    let path = std::env::temp_dir().join(format!("hecke-gl3-out-{}.txt", std::process::id()));
    let status = Command::new(env!("CARGO_BIN_EXE_hecke-gl3"))
        .args(["curve-info", "--preset", "ss3", "--out"])
        .arg(&path)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(EXIT_OK));
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert_eq!(text, call(&["curve-info", "--preset", "ss3"]).1);

    let out = Command::new(env!("CARGO_BIN_EXE_hecke-gl3")).args(["curve-info", "--p", "3"]).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_CURVE));
}
