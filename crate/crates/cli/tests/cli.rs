use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sigrad"))
        .args(args)
        .env_remove("SIGRAD_WORKERS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

/// Parses a structured document and re-serializes it with the same layout.
fn assert_round_trip(text: &str) {
    let v: serde_json::Value = serde_json::from_str(text).unwrap();
    assert_eq!(serde_json::to_string_pretty(&v).unwrap() + "\n", text);
}

#[test]
fn analyze_known_solution() {
    let o = run(&["analyze", "1782"]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    assert!(s.contains("h(n) = 1 ~ 1.00000"));
    assert!(s.contains("known solution"));
    assert!(s.contains("3 -> 11 x2"));
}

#[test]
fn analyze_two_has_empty_l() {
    let s = stdout(&run(&["analyze", "2"]));
    assert!(s.contains("  2 -> 3 x1\n"));
    assert!(s.contains("L = {}\n"));
}

#[test]
fn analyze_reports_exponent_three() {
    let s = stdout(&run(&["analyze", "30758"]));
    let line = s.lines().find(|l| l.contains("editorial.no_exponent_3_mod_4")).unwrap();
    assert!(line.contains("violated") && line.contains("13^3"), "{line}");
}

#[test]
fn analyze_structured_round_trips() {
    let o = run(&["analyze", "--structured", "2"]);
    assert_eq!(code(&o), 0);
    assert_round_trip(&stdout(&o));
    let text = stdout(&run(&["analyze", "--structured", "--chain-exponent", "1", "1782"]));
    assert_round_trip(&text);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["h"]["exact"], "1");
    assert_eq!(v["chain_exponent"], 1);
    assert_eq!(v["closure_paths"]["semantics"], "linear");
}

#[test]
fn analyze_writes_dot() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.dot");
    let o = run(&["analyze", "1782", "--dot", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let dot = std::fs::read_to_string(&path).unwrap();
    assert!(dot.starts_with("digraph \"G(1782)\" {"));
    assert_eq!(dot.matches("\"3\" -> \"11\";").count(), 2);
}

#[test]
fn analyze_usage_errors() {
    assert_eq!(code(&run(&["analyze", "abc"])), 1);
    assert_eq!(code(&run(&["analyze", "0"])), 1);
    assert_eq!(code(&run(&["analyze", "12", "--chain-exponent", "3"])), 1);
    assert_eq!(code(&run(&["analyze"])), 1);
    assert_eq!(code(&run(&["nonsense"])), 1);
    let o = run(&["analyze", "1"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("known solution"));
}

#[test]
fn search_outputs() {
    assert_eq!(stdout(&run(&["search", "--limit", "2000"])), "1\n1782\n");
    assert_eq!(stdout(&run(&["search", "--limit", "1"])), "1\n");
    assert_eq!(stdout(&run(&["search", "--limit", "10^5", "--quiet"])), "1\n1782\n");
    assert_eq!(code(&run(&["search", "--limit", "many"])), 1);
    assert_eq!(code(&run(&["search", "--limit", "0"])), 1);
    assert_eq!(code(&run(&["search", "--limit", "10", "--block", "1"])), 1);
}

#[test]
fn search_progress_on_stderr() {
    let o = run(&["search", "--limit", "5000", "--block", "1000"]);
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("progress: 5/5 blocks"));
    assert!(err.contains("2 solution(s)"));
}

#[test]
fn search_worker_env() {
    let o = Command::new(env!("CARGO_BIN_EXE_sigrad"))
        .args(["search", "--limit", "3000", "--structured", "--quiet"])
        .env("SIGRAD_WORKERS", "3")
        .output()
        .unwrap();
    let text = stdout(&o);
    assert_round_trip(&text);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["workers"], 3);
    assert_eq!(v["solutions"], serde_json::json!([1, 1782]));
    let o = Command::new(env!("CARGO_BIN_EXE_sigrad"))
        .args(["search", "--limit", "30"])
        .env("SIGRAD_WORKERS", "zero")
        .output()
        .unwrap();
    assert_eq!(code(&o), 1);
}

#[test]
fn pairs_output() {
    assert_eq!(stdout(&run(&["pairs", "--bound", "100"])), "(3,13)\n(13,61)\n");
    assert_eq!(stdout(&run(&["pairs", "--bound", "2"])), "");
    assert_round_trip(&stdout(&run(&["pairs", "--bound", "100", "--structured"])));
}

#[test]
fn identity_is_reproducible() {
    let args = ["identity", "--graphs", "1000", "--max-vertices", "12", "--seed", "7"];
    let a = run(&args);
    assert_eq!(code(&a), 0);
    let s = stdout(&a);
    assert!(s.starts_with("1000/1000 identities hold\n"));
    assert!(s.contains("seed 7"));
    assert_eq!(stdout(&run(&args)), s);
}

#[test]
fn facts_shipped_ledger_reports_refutation() {
    let o = run(&["facts"]);
    let s = stdout(&o);
    assert!(s.contains("corrected L5.3-II5-sigma-331p4"));
    assert!(s.contains("refuted   L5.1-B5d-sigma-195611sq"));
    assert_eq!(code(&o), 3);
    let o = run(&["facts", "--structured"]);
    assert_round_trip(&stdout(&o));
}

#[test]
fn facts_custom_ledger() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("claims.toml");
    std::fs::write(
        &path,
        "[[claim]]\nid = \"a\"\nkind = \"sigma_factorization\"\npayload = \"sigma(331^4) = 5 * 37861 * 62601\"\n\
         source = \"x\"\ncorrection = \"sigma(331^4) = 5 * 37861 * 63601\"\n\n\
         [[claim]]\nid = \"b\"\nkind = \"congruence\"\npayload = \"631 = 3 mod 4\"\nsource = \"x\"\n",
    )
    .unwrap();
    let o = run(&["facts", "--file", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("2 claims: 1 verified, 1 corrected, 0 refuted"));
    std::fs::write(&path, "not toml [[").unwrap();
    assert_eq!(code(&run(&["facts", "--file", path.to_str().unwrap()])), 1);
}

#[test]
fn luca_values() {
    let s = stdout(&run(&["luca", "--k", "2", "--l", "1", "--t", "2"]));
    assert!(s.contains("X = 2.56e2"), "{s}");
    assert_eq!(code(&run(&["luca", "--k", "1", "--l", "1", "--t", "21"])), 1);
}
