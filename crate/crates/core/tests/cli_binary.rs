//! The command-line binary, run as a subprocess.

use std::process::{Command, Output};

use classagg::document::{save_caf, CafDocument};
use classagg::rules::make_per_object_majority;
use classagg::{Category, Params};
use serde_json::Value;

fn classagg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_classagg"))
        .args(args)
        .env_remove("CLASSAGG_GOLDEN_DIR")
        .output()
        .unwrap()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn stderr_json(out: &Output) -> Value {
    let text = String::from_utf8_lossy(&out.stderr);
    serde_json::from_str(text.lines().last().unwrap()).unwrap()
}

#[test]
fn verify_exit_codes() {
    let out = classagg(&[
        "verify", "--claim", "coro2", "--n", "2", "--m", "3", "--rho", "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["dictatorships"], 2);
    assert_eq!(v["invocation"][0], "verify");

    let out = classagg(&[
        "verify", "--claim", "thm2", "--n", "2", "--m", "3", "--rho", "2",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(stderr_json(&out)["error"]["kind"], "hypothesis-violated");

    let out = classagg(&[
        "verify", "--claim", "thm1", "--n", "3", "--m", "3", "--rho", "2", "--budget", "1000",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn demo_and_golden_dir() {
    let out = classagg(&["demo", "table1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("Table 1:"));

    let dir = tempfile::tempdir().unwrap();
    let out = classagg(&[
        "demo",
        "table1",
        "--golden-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));

    std::fs::write(dir.path().join("table1.txt"), "not the table\n").unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_classagg"))
        .args(["demo", "table1"])
        .env("CLASSAGG_GOLDEN_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn check_a_document() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("majority.json");
    let params = Params::new(3, 3, 2).unwrap();
    let majority = make_per_object_majority(&params, Category::new(0, 2).unwrap()).unwrap();
    save_caf(&CafDocument::independent(majority), &path).unwrap();
    let out = classagg(&[
        "check",
        "--caf",
        path.to_str().unwrap(),
        "--axioms",
        "validity,unanimity",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let v = stdout_json(&out);
    assert_eq!(v["reports"][0]["passed"], false);
    assert_eq!(v["reports"][1]["passed"], true);

    let out = classagg(&[
        "check",
        "--caf",
        path.to_str().unwrap(),
        "--n",
        "2",
        "--m",
        "3",
        "--rho",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn enumerate_to_stdout() {
    let out = classagg(&[
        "enumerate",
        "--n",
        "2",
        "--m",
        "2",
        "--rho",
        "2",
        "--unanimous-tables",
        "--require",
        "unanimity",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 4);
    for line in text.lines() {
        let v: Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["kind"], "independent");
    }
}

#[test]
fn extract_methods_agree() {
    for method in ["pivotal", "exhaustive"] {
        let out = classagg(&[
            "extract",
            "--rule",
            "essential:3:swap",
            "--n",
            "3",
            "--m",
            "3",
            "--rho",
            "2",
            "--method",
            method,
        ]);
        assert_eq!(out.status.code(), Some(0));
        let v = stdout_json(&out);
        assert_eq!(v["individual"], 3);
        assert_eq!(v["method"], method);
    }
}

#[test]
fn usage_errors() {
    assert_eq!(classagg(&[]).status.code(), Some(3));
    assert_eq!(classagg(&["check"]).status.code(), Some(3));
    assert_eq!(
        classagg(&["check", "--rule", "x", "--caf", "y"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(classagg(&["--help"]).status.code(), Some(0));
}
