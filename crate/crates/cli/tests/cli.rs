use std::path::Path;
use std::process::{Command, Output};

use ftl_cli::{LawFile, LawKind, RunFile};

fn ftl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ftl")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

#[test]
fn verify_builtin_laws() {
    for law in ["chow", "hmw", "witt"] {
        let o = ftl(&["verify", "--law", law, "--degree", "6"]);
        assert_eq!(code(&o), 0, "{law}: {}", stdout(&o));
        assert!(stdout(&o).contains("associativity: ok"));
    }
}

#[test]
fn usage_errors() {
    assert_eq!(code(&ftl(&["verify", "--law", "no-such-law"])), 4);
    assert_eq!(code(&ftl(&["frobnicate"])), 4);
    assert_eq!(code(&ftl(&["walter", "--dmin", "-5", "--dmax", "0"])), 4);
    assert_eq!(code(&ftl(&["walter", "--dmin", "-1", "--dmax", "0", "--ring", "Q[x]"])), 4);
    assert_eq!(code(&ftl(&["functor", "--from", "additive", "--via", "C"])), 4);
    assert_eq!(code(&ftl(&["functor", "--from", "additive", "--via", "Z"])), 4);
    assert_eq!(code(&ftl(&["--threads", "0", "verify", "--law", "chow"])), 4);
    assert_eq!(code(&ftl(&["--help"])), 0);
}

#[test]
fn threads_option() {
    let o = ftl(&["--threads", "2", "verify", "--law", "ko", "--degree", "6"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
}

#[test]
fn step_budget_marks_runs_incomplete() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(dir.path(), "run.json");
    let o = Command::new(env!("CARGO_BIN_EXE_ftl"))
        .args(["walter", "--dmin", "-4", "--dmax", "0", "--out", &out])
        .env("FTL_STEP_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(code(&o), 3);
    let run = RunFile::from_json(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(run.incomplete);
    let o = Command::new(env!("CARGO_BIN_EXE_ftl"))
        .args(["walter", "--dmin", "-1", "--dmax", "0"])
        .env("FTL_STEP_BUDGET", "lots")
        .output()
        .unwrap();
    assert_eq!(code(&o), 4);
}

#[test]
fn run_files_roundtrip_byte_for_byte() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(dir.path(), "run.json");
    let o = ftl(&["walter", "--dmin", "-4", "--dmax", "0", "--epsilon", "-1", "--out", &out]);
    assert_eq!(code(&o), 0);
    let text = std::fs::read_to_string(&out).unwrap();
    let run = RunFile::from_json(&text).unwrap();
    assert_eq!(run.to_json(), text);
    assert_eq!(run.command, "walter");
    assert_eq!(run.degree_range, [-4, 0]);
    assert!(!run.incomplete);
    let bumped = text.replacen("\"schema_version\": 1", "\"schema_version\": 99", 1);
    assert!(RunFile::from_json(&bumped).is_err());
}

#[test]
fn buchstaber_reports_multiplicities() {
    let o = ftl(&["buchstaber"]);
    assert_eq!(code(&o), 0);
    let run = RunFile::from_json(&stdout(&o)).unwrap();
    assert_eq!(run.free, ["b2_11"]);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("length 1 at b2_11 = -2"), "{err}");
    assert!(err.contains("length 2 at b2_11 = 2"), "{err}");
}

#[test]
fn functors_write_law_files() {
    let dir = tempfile::tempdir().unwrap();
    let n = path(dir.path(), "n.json");
    assert_eq!(code(&ftl(&["functor", "--from", "additive", "--via", "N", "--degree", "4", "--out", &n])), 0);
    let law = LawFile::from_json(&std::fs::read_to_string(&n).unwrap()).unwrap();
    assert_eq!(law.kind, LawKind::TwoFgl);
    assert_eq!(law.components[1], "x^2 - 2*x*y + y^2");

    let c = path(dir.path(), "c.json");
    assert_eq!(code(&ftl(&["functor", "--from", &n, "--via", "C", "--degree", "4", "--out", &c])), 0);
    let law = LawFile::from_json(&std::fs::read_to_string(&c).unwrap()).unwrap();
    assert_eq!(law.kind, LawKind::Ftl);
    assert!(law.report.unwrap().values().all(|v| v == "ok"));

    let w = path(dir.path(), "w.json");
    assert_eq!(code(&ftl(&["functor", "--from", "multiplicative:a", "--via", "W", "--degree", "6", "--out", &w])), 0);
    let law = LawFile::from_json(&std::fs::read_to_string(&w).unwrap()).unwrap();
    assert_eq!(law.report.unwrap()["ko-comparison"], "equal");
}

#[test]
fn perturbed_law_file_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let w = path(dir.path(), "w.json");
    assert_eq!(code(&ftl(&["functor", "--from", "additive", "--via", "W", "--degree", "6", "--out", &w])), 0);
    assert_eq!(code(&ftl(&["verify", "--law", &w, "--degree", "6"])), 0);
    let mut law = LawFile::from_json(&std::fs::read_to_string(&w).unwrap()).unwrap();
    law.components[3] = format!("{} + x^2*y^2", law.components[3]);
    let bad = path(dir.path(), "bad.json");
    std::fs::write(&bad, law.to_json()).unwrap();
    let o = ftl(&["verify", "--law", &bad, "--degree", "6"]);
    assert_eq!(code(&o), 2);
    assert!(stdout(&o).contains("FAIL"));
}
