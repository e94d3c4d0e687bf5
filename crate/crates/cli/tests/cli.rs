use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;
use setrisk::fixtures;
use setrisk::io;
use setrisk::measures::{eval_measure, MeasureExpr};
use setrisk::rational::frac;

fn setrisk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_setrisk"))
        .args(args)
        .env_remove("SETRISK_BUDGET")
        .env_remove("SETRISK_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn eval_worst_case_fixture() {
    let out = setrisk(&["eval", "--measure", "wc", "--market", "mkt-a", "--position", "x1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("piece 0: u1 >= 1\n"));
    let doc = json(&setrisk(&[
        "eval", "--measure", "wc", "--market", "mkt-a", "--position", "x1", "--format", "json",
    ]));
    assert_eq!(doc["pieces"].as_array().unwrap().len(), 1);
    assert_eq!(doc["pieces"][0]["vertices"][0][0], "1");
}

#[test]
fn convexity_violation_exits_one_with_witness() {
    let args = [
        "check", "--law", "R4", "--measure", "var-strong:1/4", "--market", "mkt-b", "--seed", "7", "--budget",
        "200", "--format", "json",
    ];
    let out = setrisk(&args);
    assert_eq!(out.status.code(), Some(1));
    let doc = json(&out);
    assert_eq!(doc["passed"], false);
    assert_eq!(doc["seed"], 7);
    assert_eq!(doc["reports"][0]["verdict"], "fail");
    assert!(doc["reports"][0]["witness"]["inputs"]["x"].is_object());
    assert_eq!(setrisk(&args).stdout, out.stdout, "output must be byte-identical");
}

#[test]
fn passing_checks_exit_zero_and_honour_env_budget() {
    let out = Command::new(env!("CARGO_BIN_EXE_setrisk"))
        .args(["check", "--law", "R6", "R_eq_RAR", "--measure", "wc", "--market", "mkt-a", "--format", "json"])
        .env("SETRISK_BUDGET", "9")
        .env("SETRISK_SEED", "3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["budget"], 9);
    assert_eq!(doc["seed"], 3);
    assert_eq!(doc["reports"][0]["samples"], 9);
}

#[test]
fn demos_reproduce() {
    for name in ["remark52", "example51", "var_fixture"] {
        let out = setrisk(&["demo", name, "--budget", "60"]);
        assert_eq!(out.status.code(), Some(0), "{name}: {}", stdout(&out));
        assert!(!stdout(&out).contains("MISMATCH"));
    }
    let out = setrisk(&["demo", "remark52", "--budget", "20"]);
    assert!(stdout(&out).contains("B ∩ M = R_B(0) = ∅"));
}

#[test]
fn csv_vertices_round_trip() {
    let out = setrisk(&[
        "eval", "--measure", "var-strong:1/4", "--market", "mkt-b", "--position", "var-x", "--format", "csv-vertices",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let market = fixtures::mkt_b();
    let parsed = io::upper_set_from_csv(&stdout(&out), market.cone_m().polyhedron().clone()).unwrap();
    let direct = eval_measure(&market, &MeasureExpr::var_strong(frac(1, 4)), &fixtures::var_x()).unwrap();
    assert!(parsed.set_eq(&direct).unwrap());
    assert_eq!(parsed.pieces(), direct.pieces());

    let wrong = setrisk(&["demo", "remark52", "--format", "csv-vertices"]);
    assert_eq!(wrong.status.code(), Some(2));
}

#[test]
fn market_files_and_input_errors() {
    let mut good = tempfile::NamedTempFile::new().unwrap();
    write!(
        good,
        r#"{{ "d": 2, "probs": ["1/2","1/2"], "cone": {{ "halfspaces": [[1,1],[0,1]] }}, "subspace": {{ "coords": [0] }} }}"#
    )
    .unwrap();
    let path = good.path().to_str().unwrap();
    let out = setrisk(&["eval", "--measure", "wc", "--market", path, "--position", r#"{"rows": [[-1, 0], [0, 2]]}"#]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("piece 0: u1 >= 1"));

    let mut bad = tempfile::NamedTempFile::new().unwrap();
    write!(
        bad,
        r#"{{ "d": 2, "probs": ["1/2","1/3"], "cone": {{ "halfspaces": [[1,0],[0,1]] }}, "subspace": {{ "coords": [0] }} }}"#
    )
    .unwrap();
    let out = setrisk(&["eval", "--measure", "wc", "--market", bad.path().to_str().unwrap(), "--position", "x1"]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "ProbabilitySum");

    let out = setrisk(&["eval", "--measure", "wc", "--market", "/no/such/market.json", "--position", "x1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = setrisk(&["check", "--law", "R9", "--measure", "wc", "--market", "mkt-a"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn degenerate_regimes_exit_three() {
    let out = setrisk(&["decompose", "--measure", "wc", "--market", "mkt-a", "--position", "x2"]);
    assert_eq!(out.status.code(), Some(3));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "EmptyValue");
}

#[test]
fn decompose_certify_and_link() {
    let out = setrisk(&[
        "decompose", "--measure", "var-strong:1/4", "--market", "mkt-b", "--position", "var-x", "--theorem", "coherent",
        "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["members"].as_array().unwrap().len(), 2);
    assert_eq!(doc["reconstruction"]["verdict"], "pass");

    let out = setrisk(&["certify", "--market", "mkt-a", "--position", "x1", "--u", "0,0", "--format", "json"]);
    let doc = json(&out);
    assert_eq!(doc["valid"], true);
    assert_eq!(doc["certificate"]["y"], serde_json::json!(["1", "1"]));
    let out = setrisk(&["certify", "--market", "mkt-a", "--position", "x1", "--u", "1,0", "--format", "json"]);
    assert_eq!(json(&out)["inside"], true);

    let member = r#"{"dominance_at": {"rows": [[1, 1], [1, 1]]}}"#;
    let out = setrisk(&[
        "link", "--market", "mkt-a", "--member", member, "--y", r#"[[1, 1], [1, 1]]"#, "--budget", "40",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let out = setrisk(&["link", "--market", "mkt-a", "--member", member, "--y", "x1"]);
    assert_eq!(out.status.code(), Some(3));
}
