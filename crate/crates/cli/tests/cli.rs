use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_semicat")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> (Value, i32) {
    let out = run(args);
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)));
    (v, out.status.code().expect("exit code"))
}

fn path(name: &str) -> String {
    data(name).display().to_string()
}

#[test]
fn every_sample_file_parses() {
    let mut seen = 0;
    for entry in std::fs::read_dir(data("")).unwrap() {
        let p = entry.unwrap().path();
        if p.extension().is_some_and(|e| e == "txt") {
            continue;
        }
        semicat::formats::parse_file(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()));
        seen += 1;
    }
    assert!(seen >= 10);
}

#[test]
fn structured_and_brute_automorphisms_agree() {
    for file in ["brandt_z2_2.rees", "full_z2_2.rees", "figure1.rees", "klein.group"] {
        let (a, code_a) = json(&["aut", &path(file), "--method", "structured"]);
        let (b, code_b) = json(&["aut", &path(file), "--method", "brute"]);
        assert_eq!((code_a, code_b), (0, 0));
        assert_eq!(a["results"]["maps"], b["results"]["maps"], "{file}");
    }
    let (a, _) = json(&["aut", &path("klein.group")]);
    assert_eq!(a["results"]["count"], 6);
}

#[test]
fn classifies_perfect_matching() {
    let (v, code) = json(&["classify-graph", &path("pm4.bg")]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["class"], serde_json::json!({ "PerfectMatching": 4 }));
    assert_eq!(v["results"]["name"], "PerfectMatching(4)");
}

#[test]
fn iso_finds_witnesses_and_refutes() {
    let (yes, _) = json(&["iso", &path("full_z2_2.rees"), &path("scrambled_z2_2.rees")]);
    assert_eq!(yes["results"]["isomorphic"], true);
    let (no, code) = json(&["iso", &path("full_z2_2.rees"), &path("twisted_z2_2.rees")]);
    assert_eq!(code, 0);
    assert_eq!(no["results"]["isomorphic"], false);
    let (brute, _) = json(&["iso", &path("full_z2_2.rees"), &path("twisted_z2_2.rees"), "--method", "brute"]);
    assert_eq!(brute["results"]["isomorphic"], false);
}

#[test]
fn output_is_deterministic() {
    for args in [vec!["aut", "brandt_z2_2.rees"], vec!["orbits", "figure1.rees", "-n", "2"], vec!["decompose", "brandt_z2_2.rees"]] {
        let full: Vec<String> = std::iter::once(args[0].to_string()).chain(std::iter::once(path(args[1]))).chain(args[2..].iter().map(|s| s.to_string())).collect();
        let refs: Vec<&str> = full.iter().map(String::as_str).collect();
        let first = run(&refs).stdout;
        let second = run(&refs).stdout;
        assert_eq!(first, second);
        assert!(!String::from_utf8(first).unwrap().contains("elapsed"));
    }
}

#[test]
fn timing_is_opt_in() {
    let (v, _) = json(&["check", &path("z2.group"), "--timing"]);
    assert!(v["timing"]["elapsed_ms"].is_number());
}

#[test]
fn inputs_are_digested() {
    let (v, _) = json(&["check", &path("z2.group")]);
    let digest = v["inputs"][0]["sha256"].as_str().unwrap();
    assert_eq!(digest.len(), 64);
    assert_eq!(v["status"], "ok");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.rees");
    std::fs::write(&bad, "rees\ngroup 1\n0\nmatrix 2 2\n0 0\n. .\n").unwrap();
    let (v, code) = json(&["check", bad.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(v["status"], "error");
    assert!(v["error"].as_str().unwrap().contains("invalid structure"));

    let garbled = dir.path().join("garbled.group");
    std::fs::write(&garbled, "group 2\n0 1\n").unwrap();
    assert_eq!(run(&["check", garbled.to_str().unwrap()]).status.code(), Some(1));

    let missing = dir.path().join("missing.group");
    assert_eq!(run(&["check", missing.to_str().unwrap()]).status.code(), Some(2));

    assert_eq!(run(&["normalize", &path("z2.group")]).status.code(), Some(1));
    assert_eq!(run(&["aut", &path("figure1.rees"), "--method", "brute", "--max-order", "4"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "no-such-suite"]).status.code(), Some(1));
}

#[test]
fn orbits_cross_check_and_stabilizer() {
    let (v, code) = json(&["orbits", &path("pm4.bg"), "-n", "2"]);
    assert_eq!(code, 0);
    let r = &v["results"];
    assert_eq!(r["automorphism_group_order"], 24);
    assert_eq!(r["union_find_agrees"], true);
    // Sym(4) acting diagonally on 8 vertices: two orbits on points.
    assert_eq!(r["profile"]["counts"][0], 2);
    assert!(v["warnings"][0].as_str().unwrap().contains("finite evidence"));

    let dir = tempfile::tempdir().unwrap();
    let fix = dir.path().join("fix.txt");
    std::fs::write(&fix, "0 4\n").unwrap();
    let (v, _) = json(&["orbits", &path("pm4.bg"), "-n", "1", "--fix", fix.to_str().unwrap()]);
    assert_eq!(v["results"]["group_order"], 6);
    assert_eq!(v["results"]["profile"]["counts"][0], 4);
}

#[test]
fn verify_suite_reports() {
    let (v, code) = json(&["verify", "counterexample"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["passed"], true);
    assert_eq!(v["results"]["suites"][0]["suite"], "counterexample");
}

#[test]
fn text_format_is_readable() {
    let out = run(&["predicates", &path("brandt_z2_2.rees"), "--format", "text"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("status: ok"));
    assert!(text.contains("is_brandt: true"), "{text}");

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.sss");
    std::fs::write(
        &bad,
        "sss\nsemilattice 2\n0 0\n0 1\ncomponent 0\ngroup 2\n0 1\n1 0\ncomponent 1\ngroup 2\n0 1\n1 0\nconnector 1 0\n1 1\n",
    )
    .unwrap();
    let out = run(&["check", bad.to_str().unwrap(), "--format", "text"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(text.contains("error: invalid structure"), "{text}");
}

#[test]
fn normalize_output_is_a_valid_file() {
    let (v, code) = json(&["normalize", &path("figure1.rees")]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["check"]["verdict"], "valid");
    let text = v["results"]["file"].as_str().unwrap();
    let s = semicat::formats::parse_str(text, None).unwrap();
    assert_eq!(s.kind(), "rees");
}
