use std::path::PathBuf;
use std::process::{Command, Output};

use cohere_cli::kb::KbFile;
use serde_json::Value;

fn kb_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../kb").join(name)
}

fn cohere(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cohere"))
        .args(args)
        .env_remove("COHERE_MAX_CONSTITUENTS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn linda() -> String {
    kb_path("linda.kb").display().to_string()
}

fn write_kb(text: &str) -> tempfile::NamedTempFile {
    let mut file = tempfile::Builder::new().suffix(".kb").tempfile().unwrap();
    std::io::Write::write_all(&mut file, text.as_bytes()).unwrap();
    file
}

#[test]
fn linda_entailment() {
    let out = cohere(&["--kb", &linda(), "entails", "~N | L"]);
    assert_eq!(stdout(&out), "P-ENTAILED\n");
    assert_eq!(out.status.code(), Some(0));

    let out = cohere(&["--kb", &linda(), "entails", "G | N"]);
    assert_eq!(stdout(&out), "NOT P-ENTAILED\n");
    assert_eq!(out.status.code(), Some(0));

    let out = cohere(&["--kb", &linda(), "--strict", "entails", "G | N"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn linda_queries_by_both_methods() {
    let out = cohere(&["--kb", &linda(), "entails", "--method", "both"]);
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 5);
    assert!(text.lines().all(|l| l.starts_with("P-ENTAILED ")), "{text}");
    assert!(text.contains("(quasi conjunction of sl, nls)"));

    let out = cohere(&["--kb", &linda(), "--oracle", "entails", "~N | L"]);
    assert_eq!(stdout(&out), "P-ENTAILED\n");

    // With this target the family has more constituents than vertex
    // enumeration accepts.
    let out = cohere(&["--kb", &linda(), "--oracle", "entails", "G | N"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("exceed the limit of 14"));
}

#[test]
fn oracle_agrees_on_entailment() {
    let path = kb_path("or_rule.kb").display().to_string();
    let args = ["--kb", &path, "entails", "A | H | K", "A | H & K", "A | H & ~K"];
    let lp = stdout(&cohere(&args));
    assert_eq!(lp, "P-ENTAILED      A | H | K\nNOT P-ENTAILED  A | H & K\nNOT P-ENTAILED  A | H & ~K\n");
    let mut with_oracle = args.to_vec();
    with_oracle.push("--oracle");
    assert_eq!(stdout(&cohere(&with_oracle)), lp);
}

#[test]
fn rule_bounds() {
    assert_eq!(stdout(&cohere(&["bounds", "qc", "1/2", "1/2"])), "[0, 2/3]\n");
    assert_eq!(stdout(&cohere(&["bounds", "qd", "0.5", "0.5"])), "[1/3, 1]\n");
    assert_eq!(stdout(&cohere(&["bounds", "or", "9/10", "9/10"])), "[9/11, 18/19]\n");
    assert_eq!(stdout(&cohere(&["bounds", "bic", "0", "0"])), "[0, 0]\n");
    assert_eq!(stdout(&cohere(&["bounds", "compound", "1/2", "1/3", "3/4"])), "[1/8, 1/8]\n");

    let out = cohere(&["bounds", "gn", "3/4", "1/4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("nondecreasing"));
}

#[test]
fn constrained_bounds_use_the_simplex() {
    let out = cohere(&["--kb", &kb_path("chain.kb").display().to_string(), "bounds", "qc"]);
    assert_eq!(stdout(&out), "[1/4, 3/4]\n");
    assert!(stderr(&out).contains("logical constraints"), "{}", stderr(&out));

    let out = cohere(&["--kb", &kb_path("or_rule.kb").display().to_string(), "bounds", "qd"]);
    assert_eq!(stdout(&out), "[9/11, 18/19]\n");
    assert!(stderr(&out).contains("logically dependent"));
}

#[test]
fn coherence_check_output() {
    let kb = write_kb("atoms: A B\nconditionals:\n  or: (A | B) | T = 2/10\n  ba: B | ~A = 8/10\n");
    let path = kb.path().display().to_string();
    let out = cohere(&["--kb", &path, "check"]);
    let text = stdout(&out);
    assert!(text.starts_with("INCOHERENT\n"), "{text}");
    assert!(text.contains("sure-win stakes"));
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(cohere(&["--kb", &path, "--strict", "check"]).status.code(), Some(1));
    assert_eq!(stdout(&cohere(&["--kb", &path, "--oracle", "check"])), "INCOHERENT\n");

    let out = cohere(&["--kb", &path, "--json", "check"]);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["coherent"], Value::Bool(false));
    assert_eq!(v["names"], serde_json::json!(["or", "ba"]));
    let gains = v["certificate"]["gains"].as_array().unwrap();
    assert!(gains.iter().all(|g| g.as_str().unwrap().contains('/')));

    let kb = write_kb("atoms: A B\nconditionals:\n  or: (A | B) | T = 0.8\n  ba: B | ~A = 0.2\n");
    let out = cohere(&["--kb", &kb.path().display().to_string(), "check"]);
    assert!(stdout(&out).starts_with("COHERENT\n"));
}

#[test]
fn extension_with_and_without_oracle() {
    let path = kb_path("or_rule.kb").display().to_string();
    let lp = stdout(&cohere(&["--kb", &path, "extend", "A | H | K"]));
    let oracle = stdout(&cohere(&["--kb", &path, "--oracle", "extend", "A | H | K"]));
    assert_eq!(lp, "[9/11, 18/19]\n");
    assert_eq!(lp, oracle);
}

#[test]
fn json_output_is_stable() {
    let args = ["--kb", &linda(), "--json", "entails", "--method", "both"];
    let first = stdout(&cohere(&args));
    assert_eq!(first, stdout(&cohere(&args)));
    let v: Value = serde_json::from_str(&first).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 5);
    assert_eq!(v[0]["target"], "~N | L");
    assert_eq!(v[0]["premises"], serde_json::json!(["sl", "nls"]));

    let v: Value = serde_json::from_str(&stdout(&cohere(&["--json", "bounds", "qc", "1/2", "1/2"]))).unwrap();
    assert_eq!(v["interval"]["lo"], "0/1");
    assert_eq!(v["interval"]["hi"], "2/3");
    assert_eq!(v["premises"], serde_json::json!(["1/2", "1/2"]));
}

#[test]
fn regions() {
    assert_eq!(stdout(&cohere(&["region", "Lqc", "--gamma", "1/2", "3/4", "3/4"])), "IN\n");
    assert_eq!(stdout(&cohere(&["region", "Uqc", "--gamma", "2/5", "2/5", "2/5"])), "NOT IN\n");
    assert_eq!(stdout(&cohere(&["region", "Lqd", "--gamma", "2/5", "2/5", "2/5"])), "NOT IN\n");
    let grid = stdout(&cohere(&["region", "Uqd", "--gamma", "1/2", "--grid", "4"]));
    let rows: Vec<&str> = grid.lines().skip(1).collect();
    assert_eq!(rows.len(), 5);
    // x + y <= 1/2 on the quarter grid.
    assert!(rows[4].ends_with("###.."), "{grid}");
    assert!(rows[0].ends_with("....."), "{grid}");
}

#[test]
fn loops() {
    let text = stdout(&cohere(&["loop", "--n", "3"]));
    assert_eq!(text.lines().count(), 6);
    assert!(text.lines().all(|l| l.starts_with("P-ENTAILED ")));
    assert_eq!(stdout(&cohere(&["loop", "--n", "4", "--derangement", "3,4,2,1"])), "P-EQUIVALENT\n");
    assert_eq!(stdout(&cohere(&["loop", "--n", "4", "--derangement", "2,1,4,3"])), "NOT P-EQUIVALENT\n");
    assert_eq!(cohere(&["loop", "--n", "3", "--derangement", "1,3,2"]).status.code(), Some(2));
}

#[test]
fn truth_table_rows() {
    let text = stdout(&cohere(&["truth-table", "A | H", "B | K"]));
    assert_eq!(text.lines().next().unwrap(), "world              A | H  B | K  C  D");
    assert!(text.contains("A & H & ~B & K         1      0  0  1\n"), "{text}");
    assert!(text.ends_with("9 constituents\n"));
}

#[test]
fn operators() {
    assert_eq!(stdout(&cohere(&["tnorm", "hamacher", "1/2", "1/2", "1/2"])), "1/4 ≈ 0.250000\n");
    assert_eq!(stdout(&cohere(&["tconorm", "hamacher", "1/2", "1/2"])), "2/3 ≈ 0.666667\n");
    assert_eq!(stdout(&cohere(&["tnorm", "hamacher", "--lambda", "1", "1/2", "1/3"])), "1/6 ≈ 0.166667\n");
    assert_eq!(stdout(&cohere(&["tconorm", "lukasiewicz", "0.7", "0.6"])), "1 ≈ 1.000000\n");
    assert_eq!(cohere(&["tnorm", "hamacher", "--lambda", "-1", "1/2"]).status.code(), Some(2));
}

#[test]
fn errors_exit_with_two() {
    let kb = write_kb("atoms: A\nconditionals:\n  a: A | T = 3/2\n");
    let out = cohere(&["--kb", &kb.path().display().to_string(), "consistent"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 3, column 14"), "{}", stderr(&out));

    let kb = write_kb("atoms: A\nconditionals:\n  A | F\n");
    let out = cohere(&["--kb", &kb.path().display().to_string(), "consistent"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("impossible"));

    assert_eq!(cohere(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(cohere(&["bounds", "qc", "x"]).status.code(), Some(2));
    assert_eq!(cohere(&["entails", "A"]).status.code(), Some(2));
}

#[test]
fn constituent_limit_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_cohere"))
        .args(["--kb", &linda(), "consistent"])
        .env("COHERE_MAX_CONSTITUENTS", "3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("exceed the limit of 3"), "{}", stderr(&out));
}

#[test]
fn shipped_files_round_trip() {
    for name in ["linda.kb", "or_rule.kb", "chain.kb"] {
        let kb = KbFile::load(&kb_path(name)).unwrap();
        assert_eq!(KbFile::parse(&kb.to_string()).unwrap(), kb, "{name}");
    }
}
