//! End-to-end runs of the binary against the shipped fixtures: exit codes,
//! verdict wording, and byte-identical JSON output.

use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stringtop"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn every_fixture_parses_and_validates() {
    for name in ["s2.alg", "s3.alg", "cp2.alg"] {
        let out = run(&["check-pd", &fixture(name)]);
        assert_eq!(out.status.code(), Some(0), "{name}: {}", stdout(&out));
    }
    for name in ["s2-sullivan.alg", "s3-sullivan.alg", "cp2-sullivan.alg"] {
        let out = run(&["betti", &fixture(name), "--max-degree", "6"]);
        assert_eq!(out.status.code(), Some(0), "{name}: {}", stdout(&out));
    }
    for name in ["bs1.alg", "bsu2.alg", "bg-rank2.alg"] {
        let out = run(&["betti", &fixture(name), "--max-degree", "6"]);
        assert_eq!(out.status.code(), Some(0), "{name}: {}", stdout(&out));
    }
    // the corrupted table parses but fails the duality check
    let out = run(&["check-pd", &fixture("cp2-bad.alg")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("axiom (i)"), "{}", stdout(&out));
}

#[test]
fn coproduct_verdict_and_exit_codes() {
    let out = run(&["loop-coproduct", &fixture("s3.alg"), "--max-degree", "6"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("trivial (χ = 0)"), "{}", stdout(&out));

    let out = run(&["loop-coproduct", &fixture("s2.alg"), "--max-degree", "5"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("2·Ω⊗c"), "{}", stdout(&out));
}

#[test]
fn bg_verdicts() {
    let out = run(&["bg-loop-product", &fixture("bs1.alg"), "--max-degree", "10"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("loop product trivial up to degree 10"));

    let out = run(&["bg-loop-coproduct", &fixture("bsu2.alg"), "--max-degree", "10"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("surjective up to degree 10"));
}

#[test]
fn usage_and_parse_errors_exit_two() {
    // missing truncation for an infinite model
    let out = run(&["loop-betti", &fixture("s3-sullivan.alg")]);
    assert_eq!(out.status.code(), Some(2));

    // malformed file
    let dir = std::env::temp_dir().join("stringtop-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.alg");
    std::fs::write(&bad, "kind: sullivan\n[generators]\nx = ?\n").unwrap();
    let out = run(&["betti", bad.to_str().unwrap(), "--max-degree", "3"]);
    assert_eq!(out.status.code(), Some(2));

    // unknown subcommand is a usage error
    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn finite_algebras_default_their_truncation() {
    // top degree plus the operation's shift: 3 + 3 for the three-sphere
    let out = run(&["loop-product", &fixture("s3.alg")]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("classes through degree 6"), "{}", stdout(&out));
}

#[test]
fn insufficient_truncation_exits_three() {
    let out = run(&["loop-product", &fixture("cp2.alg"), "--max-degree", "2"]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn json_output_is_deterministic() {
    let dir = std::env::temp_dir().join("stringtop-cli-json");
    std::fs::create_dir_all(&dir).unwrap();
    let a = dir.join("a.json");
    let b = dir.join("b.json");
    for path in [&a, &b] {
        let out = run(&[
            "loop-betti",
            &fixture("s3.alg"),
            "--max-degree",
            "6",
            "--json",
            path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
    }
    let first = std::fs::read(&a).unwrap();
    let second = std::fs::read(&b).unwrap();
    assert_eq!(first, second, "two runs must emit identical bytes");
    let parsed: serde_json::Value = serde_json::from_slice(&first).unwrap();
    assert_eq!(parsed["betti"][0], 1);
    assert_eq!(parsed["degrees"][0], "0");
    assert!(parsed["verdicts"].is_object());
}

#[test]
fn fiber_cross_check_runs() {
    let out = run(&[
        "fiber-intersection",
        &fixture("s2.alg"),
        "--max-degree",
        "6",
        "--sullivan",
        &fixture("s2-sullivan.alg"),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("ranks agree"), "{}", stdout(&out));
}

#[test]
fn threads_env_does_not_change_results() {
    let plain = run(&["betti", &fixture("cp2-sullivan.alg"), "--max-degree", "8"]);
    let threaded = Command::new(env!("CARGO_BIN_EXE_stringtop"))
        .args(["betti", &fixture("cp2-sullivan.alg"), "--max-degree", "8"])
        .env("STRINGTOP_THREADS", "3")
        .output()
        .expect("binary runs");
    assert_eq!(plain.status.code(), Some(0));
    assert_eq!(threaded.status.code(), Some(0));
    assert_eq!(stdout(&plain), stdout(&threaded));
}
