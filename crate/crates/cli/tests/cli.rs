use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symdyn")).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("symdyn-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn exit_codes_follow_verdicts() {
    assert_eq!(run(&["conjugate", "ex:ex4.1-A", "ex:ex4.1-C"]).status.code(), Some(0));
    assert_eq!(run(&["conjugate", "ex:ex3.1-A", "ex:ex3.1-B"]).status.code(), Some(1));
    let out = run(&["search", "balanced", "ex:ex3.5-k4-A", "ex:ex3.5-k4-B", "--mmax", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["verdict"], "unknown");
}

#[test]
fn usage_and_data_errors() {
    assert_eq!(run(&["no-such-command"]).status.code(), Some(64));
    assert_eq!(run(&["invariants", "ex:no-such-fixture"]).status.code(), Some(64));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    let bad = temp_file("bad.txt", "2 2\n1 x\n1 1\n");
    let out = run(&["invariants", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(65));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    let msg = err["error"].as_str().unwrap();
    assert!(msg.contains("line 2, column 3"), "{msg}");
    let negative = temp_file("neg.txt", "2 2\n1 -1\n0 1\n");
    assert_eq!(run(&["invariants", negative.to_str().unwrap()]).status.code(), Some(65));
}

#[test]
fn inline_files_and_examples_agree() {
    let file = temp_file("a.txt", "# the split pair\n2 2\n1 1\n2 0\n");
    let from_file = run(&["invariants", file.to_str().unwrap()]);
    let from_fixture = run(&["invariants", "ex:ex4.1-A"]);
    let from_flag = run(&["--example", "ex4.1-A", "invariants"]);
    assert_eq!(from_file.status.code(), Some(0));
    assert_eq!(from_file.stdout, from_fixture.stdout);
    assert_eq!(from_file.stdout, from_flag.stdout);
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["invariants", "ex:ashley"][..],
        &["search", "elementary", "ex:ex3.1-A", "ex:ex3.1-B"],
        &["sofic-krieger", "--preset", "even-shift"],
    ] {
        assert_eq!(run(args).stdout, run(args).stdout, "{args:?}");
    }
}

#[test]
fn quiet_prints_nothing() {
    let out = run(&["--quiet", "flow", "ex:two", "ex:cuntz-splice"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
}

#[test]
fn searched_witness_verifies() {
    let out = run(&["search", "elementary", "ex:ex3.1-A", "ex:ex3.1-B"]);
    assert_eq!(out.status.code(), Some(0));
    let cert = &json(&out)["certificate"];
    let witness = temp_file("witness.json", &cert["witness"].to_string());
    let (a, b) = if cert["reversed"] == true { ("ex:ex3.1-B", "ex:ex3.1-A") } else { ("ex:ex3.1-A", "ex:ex3.1-B") };
    let verified = run(&["verify", "--witness", witness.to_str().unwrap(), a, b]);
    assert_eq!(verified.status.code(), Some(0), "{}", String::from_utf8_lossy(&verified.stdout));
    let swapped = run(&["verify", "--witness", witness.to_str().unwrap(), b, a]);
    assert_ne!(swapped.status.code(), Some(0));
}

#[test]
fn oracle_subcommands() {
    let out = run(&["oracle", "verify", "--fixture", "ex5.2"]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&["oracle", "verify", "--fixture", "ex5.2", "--delay", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["obstruction"]["check"], "eventual_identity");
    assert_eq!(run(&["oracle", "conjugacy", "ex:ex3.1-A", "ex:ex3.1-B"]).status.code(), Some(1));
}
