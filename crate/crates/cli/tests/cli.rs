use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn eutactic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eutactic"))
        .args(args)
        .env_remove("EUTACTIC_ORDER")
        .output()
        .expect("binary runs")
}

fn run_on(cmd: &str, file: &str, extra: &[&str]) -> Output {
    let path = data(file);
    let mut args = vec![cmd, path.to_str().unwrap()];
    args.extend_from_slice(extra);
    eutactic(&args)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("valid json on stdout")
}

#[test]
fn check_verdicts() {
    let o = run_on("check", "a2.json", &[]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "eutactic: true\n");

    let o = run_on("check", "not_eutactic.json", &[]);
    assert_eq!(code(&o), 1);
    assert_eq!(stdout(&o), "eutactic: false\n");
}

#[test]
fn check_rejects_vectors_outside_dual() {
    let o = run_on("check", "not_dual.json", &[]);
    assert_eq!(code(&o), 2);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("vector 0") && err.contains("dual lattice"), "{err}");
}

#[test]
fn malformed_input_names_the_field() {
    let o = run_on("check", "malformed.json", &[]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("vectors[1]"));

    let o = eutactic(&["check", "/nonexistent/star.json"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn truncated_json_reports_a_line() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_eutactic"))
        .args(["check", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"{\"gram\": [[2]],\n \"vectors\": [[").unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn extremal_certificates() {
    let o = run_on("extremal", "a1.json", &[]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["extremal"], true);
    assert_eq!(v["min"], "0");
    assert_eq!(v["threshold"], "0");

    let o = run_on("extremal", "doubled.json", &[]);
    assert_eq!(code(&o), 1);
    let v = json(&o);
    assert_eq!(v["extremal"], false);
    assert_eq!(v["min"], "0");
    assert_eq!(v["threshold"], "1/24");

    let o = eutactic(&["extremal", "--type", "G2"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["extremal"], true);
    assert_eq!(v["threshold"], "1/6");
}

#[test]
fn extremal_requires_eutaxy() {
    assert_eq!(code(&run_on("extremal", "not_eutactic.json", &[])), 2);
    assert_eq!(code(&eutactic(&["extremal"])), 2);
    let a1 = data("a1.json");
    assert_eq!(code(&eutactic(&["extremal", a1.to_str().unwrap(), "--type", "A1"])), 2);
}

#[test]
fn expand_leading_terms() {
    let o = run_on("expand", "a1.json", &["--order", "3"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "3 -1/2 -1\n3 1/2 1\n");
}

#[test]
fn expand_checks() {
    let o = run_on("expand", "a1.json", &["--order", "240", "--check-singular"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "singular: true\n");

    let o = run_on("expand", "a1.json", &["--order", "240", "--heat"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "heat: zero\n");

    let o = run_on("expand", "doubled.json", &["--check-holomorphic"]);
    assert_eq!(code(&o), 1);
    let out = stdout(&o);
    assert!(out.starts_with("holomorphic: false\n"));
    assert!(out.lines().any(|l| l.starts_with("5 ") && l.ends_with("deficit -1/12")), "{out}");

    let o = run_on("expand", "doubled.json", &["--check-singular", "--order", "30"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn expand_order_from_environment() {
    let path = data("a1.json");
    let o = Command::new(env!("CARGO_BIN_EXE_eutactic"))
        .args(["expand", path.to_str().unwrap()])
        .env("EUTACTIC_ORDER", "3")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).lines().count(), 2);

    assert_eq!(code(&run_on("expand", "a1.json", &["--order", "-1"])), 2);
    assert_eq!(code(&run_on("expand", "a1.json", &["--order", "many"])), 2);
}

#[test]
fn expand_is_byte_deterministic() {
    let a = run_on("expand", "a2.json", &["--order", "120"]);
    let b = run_on("expand", "a2.json", &["--order", "120", "--threads", "1"]);
    assert_eq!(code(&a), 0);
    assert!(!a.stdout.is_empty());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn catalog_star_and_lattice() {
    let o = eutactic(&["catalog", "--type", "A2", "--star"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["gram"], serde_json::json!([[2, 1], [1, 2]]));
    assert_eq!(v["vectors"].as_array().unwrap().len(), 3);

    let o = eutactic(&["catalog", "--type", "A2", "--lattice"]);
    assert_eq!(json(&o), serde_json::json!({"gram": [[2, 1], [1, 2]]}));

    assert_eq!(code(&eutactic(&["catalog", "--type", "H3"])), 2);
    assert_eq!(code(&eutactic(&["catalog", "--type", "D3"])), 2);
}

#[test]
fn catalog_output_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    for t in ["B3", "F4", "E6"] {
        let star = eutactic(&["catalog", "--type", t]);
        let path = dir.path().join(format!("{t}.json"));
        std::fs::write(&path, &star.stdout).unwrap();
        let p = path.to_str().unwrap();
        assert_eq!(stdout(&eutactic(&["check", p])), "eutactic: true\n");
        assert_eq!(stdout(&eutactic(&["recognize", p])), format!("{t}\n"));
    }
}

#[test]
fn recognize_support() {
    let o = run_on("recognize", "a2.json", &[]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "A2\n");

    let o = run_on("recognize", "doubled.json", &[]);
    assert_eq!(code(&o), 1);
}

#[test]
fn search_reports() {
    let o = run_on("search", "a2_lattice.json", &[]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["counterexamples"], serde_json::json!([]));
    assert_eq!(v["extremal"][0]["type"], "A2");

    let o = run_on("search", "a2_lattice.json", &["--count"]);
    assert_eq!(json(&o)["stars"], 1);

    assert_eq!(code(&run_on("search", "indefinite_lattice.json", &[])), 2);
}

#[test]
fn verify_theorem_on_files() {
    let a2 = data("a2_lattice.json");
    let o = eutactic(&["verify-theorem", a2.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v.as_array().unwrap().len(), 1);
    assert_eq!(v[0]["counterexamples"], serde_json::json!([]));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&eutactic(&[])), 2);
    assert_eq!(code(&eutactic(&["frobnicate"])), 2);
    assert_eq!(code(&eutactic(&["--threads", "0", "check", "x"])), 2);
}
