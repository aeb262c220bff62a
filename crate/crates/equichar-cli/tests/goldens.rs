//! Byte-exact command output and the exit-code contract of the binary.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_equichar"))
}

fn stdout_of(args: &[&str]) -> (Option<i32>, String) {
    let out = bin().args(args).output().expect("binary runs");
    (out.status.code(), String::from_utf8(out.stdout).expect("utf8 output"))
}

#[test]
fn relations_rank_two_matches_golden() {
    let (code, stdout) = stdout_of(&["relations", "--n", "2"]);
    assert_eq!(code, Some(0));
    assert_eq!(stdout, include_str!("goldens/relations_n2.txt"));
}

#[test]
fn presentation_u2_matches_golden() {
    let (code, stdout) = stdout_of(&["presentation", "--family", "u", "--rank", "2"]);
    assert_eq!(code, Some(0));
    assert_eq!(stdout, include_str!("goldens/presentation_u2.txt"));
}

#[test]
fn map_tensor_line_matches_golden() {
    let (code, stdout) = stdout_of(&["map", "--kind", "tensor-line", "--rank", "1"]);
    assert_eq!(code, Some(0));
    assert_eq!(stdout, include_str!("goldens/map_tensor_line_1.txt"));
}

#[test]
fn usage_errors_exit_two() {
    let cases: &[&[&str]] = &[
        &["relations", "--bogus"],
        &["relations", "--n", "2", "--s", "9", "--i", "9", "--t", "9", "--j", "9"],
        &["relations", "--n", "2", "--s", "0"],
        &["decompose", "--n", "2", "--expr", "w1"],
        &["decompose", "--n", "2", "--expr", "w1 +"],
        &["presentation", "--family", "zz", "--rank", "2"],
        &["presentation", "--family", "u", "--rank", "9"],
        &["dims", "--family", "su", "--rank", "2", "--max-degree", "2"],
        &["map", "--kind", "bogus", "--rank", "1"],
        &["stems", "--mul", "x", "u_s^2"],
        &["verify", "--suite", "bogus"],
    ];
    for args in cases {
        let out = bin().args(*args).output().expect("binary runs");
        assert_eq!(out.status.code(), Some(2), "expected exit 2 for {args:?}");
    }
}

#[test]
fn corrupt_cache_exits_one() {
    let dir = tempfile::tempdir().expect("tempdir");
    let slot = dir.path().join("rel").join("n2");
    std::fs::create_dir_all(&slot).expect("cache layout");
    std::fs::write(slot.join("s0i1t0j1.json"), b"not json").expect("seed garbage");
    let out = bin()
        .args(["relations", "--n", "2", "--s", "0", "--i", "1", "--t", "0", "--j", "1", "--cache"])
        .arg(dir.path())
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn cache_round_trips_through_the_directory() {
    let dir = tempfile::tempdir().expect("tempdir");
    let run = || {
        bin().args(["relations", "--n", "2", "--cache"]).arg(dir.path()).output().expect("binary runs")
    };
    let first = run();
    assert!(first.status.success());
    assert!(dir.path().join("rel").join("n2").is_dir(), "cache entries were written");
    let second = run();
    assert!(second.status.success());
    assert_eq!(first.stdout, second.stdout, "cached rerun prints the same set");
}

#[test]
fn json_outputs_are_well_formed() {
    let (code, stdout) = stdout_of(&["map", "--kind", "tensor-line", "--rank", "1", "--json"]);
    assert_eq!(code, Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout).expect("valid json");
    assert_eq!(doc["kind"], "tensor-line");
    let (code, stdout) =
        stdout_of(&["decompose", "--n", "2", "--expr", "w1*u1 + w2*u2", "--json"]);
    assert_eq!(code, Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout).expect("valid json");
    assert_eq!(doc["rank"], 2);
    assert!(doc["terms"].as_array().is_some_and(|t| !t.is_empty()));
}
