//! The `stagec` binary: outputs and exit codes.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn stagec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stagec"))
        .args(args)
        .current_dir(root())
        .env_remove("STAGEC_MAX_STEPS")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("stagec-cli-{}", std::process::id()));
    let p = dir.join(name);
    std::fs::create_dir_all(p.parent().unwrap()).unwrap();
    std::fs::write(&p, contents).unwrap();
    p
}

#[test]
fn run_power_prints_32() {
    let o = stagec(&["run", "corpus/power.sth"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o), "32\n");
}

#[test]
fn check_rejects_c1_with_a_hint() {
    let o = stagec(&["check", "corpus/c1_reject.sth"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(
        stderr(&o)
            .contains("no evidence for Show a at level 1 (have it at level 0; consider CodeC)"),
        "{}",
        stderr(&o)
    );
}

#[test]
fn corpus_table_reports_all_verdicts() {
    let o = stagec(&["corpus", "corpus"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let lines: Vec<_> = out.lines().collect();
    assert_eq!(lines.len(), 13);
    assert!(lines[..12].iter().all(|l| l.starts_with("PASS")));
    assert_eq!(lines[12], "12/12 verdicts matched");
    let mut names: Vec<_> = lines[..12]
        .iter()
        .map(|l| l.split_whitespace().nth(1).unwrap())
        .collect();
    let sorted = {
        let mut s = names.clone();
        s.sort();
        s
    };
    assert_eq!(names, sorted);
    names.dedup();
    assert_eq!(names.len(), 12);
}

#[test]
fn corpus_mismatch_exits_1() {
    let file = scratch("bad/wrong.sth", "-- EXPECT: runs-to 4\nmain = add 2 1\n");
    let dir = file.parent().unwrap();
    let o = stagec(&["corpus", dir.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
    assert!(stdout(&o).contains("0/1 verdicts matched"));
}

#[test]
fn elaborate_matches_golden_and_writes_files() {
    let o = stagec(&["elaborate", "corpus/c1prime.sth"]);
    assert_eq!(o.status.code(), Some(0));
    let golden = std::fs::read_to_string(root().join("corpus/golden/c1prime.core")).unwrap();
    assert_eq!(stdout(&o), golden);

    let out = scratch("c1prime.core", "");
    let o = stagec(&[
        "elaborate",
        "corpus/c1prime.sth",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).is_empty());
    assert_eq!(std::fs::read_to_string(&out).unwrap(), golden);

    let o = stagec(&["lint", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn lint_rejects_ill_typed_core() {
    let f = scratch("bad.core", "main : Int = add 1 true");
    let o = stagec(&["lint", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(
        stderr(&o).contains("lint error[TypeMismatch]"),
        "{}",
        stderr(&o)
    );
}

#[test]
fn json_diagnostics_for_stage_errors() {
    let f = scratch("tardy.sth", "main = (\\x : Int -> [| x |]) 1");
    let o = stagec(&["--json", "check", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(stderr(&o).trim()).unwrap();
    assert_eq!(v["phase"], "typecheck");
    assert_eq!(v["code"], "StageError");
    assert_eq!(v["boundLevel"], 0);
    assert_eq!(v["useLevel"], 1);
    assert_eq!(v["span"]["line"], 1);
}

#[test]
fn exit_codes_by_phase() {
    let parse = scratch("parse.sth", "main = (add 1");
    assert_eq!(
        stagec(&["check", parse.to_str().unwrap()]).status.code(),
        Some(2)
    );
    let runtime = scratch("overflow.sth", "main = mul 9223372036854775807 2");
    let o = stagec(&["run", runtime.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("runtime error[Overflow]"));
    assert_eq!(
        stagec(&["check", "no/such/file.sth"]).status.code(),
        Some(2)
    );
    assert_eq!(stagec(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn step_budget_flag_and_environment() {
    let o = stagec(&["run", "corpus/power.sth", "--max-steps", "5"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("BudgetExceeded"));
    let o = Command::new(env!("CARGO_BIN_EXE_stagec"))
        .args(["run", "corpus/power.sth"])
        .current_dir(root())
        .env("STAGEC_MAX_STEPS", "5")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn json_trace_lines() {
    let o = stagec(&["--json", "run", "--trace", "corpus/power.sth"]);
    assert_eq!(o.status.code(), Some(0));
    let lines: Vec<serde_json::Value> = stdout(&o)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    let (last, steps) = lines.split_last().unwrap();
    assert_eq!(last["value"], "32");
    assert_eq!(last["steps"].as_u64().unwrap() as usize, steps.len());
    for (i, s) in steps.iter().enumerate() {
        assert_eq!(s["step"].as_u64().unwrap() as usize, i + 1);
        assert!(s["rule"].as_str().unwrap().starts_with("D"));
        assert!(s["program"].as_str().unwrap().contains("main"));
    }
    let spdefs = steps.iter().filter(|s| s["rule"] == "DP_SPDefBeta").count();
    assert_eq!(spdefs, 1);
}

#[test]
fn text_trace_names_rules() {
    let o = stagec(&["run", "--trace", "corpus/c2.sth"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("[1] DP_DefBeta\n"));
    assert!(out.contains("DP_SPDefBeta"));
    assert!(out.ends_with("\"42\"\n"));
}
