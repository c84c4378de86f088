use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_polydual"))
}

fn file(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("polydual-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const CUBE: &str = r#"{"vertices": [[1,1,1],[1,1,-1],[1,-1,1],[1,-1,-1],[-1,1,1],[-1,1,-1],[-1,-1,1],[-1,-1,-1]]}"#;
const GAMMA1: &str = r#"{"vertices": [[-1,-1,0],[-1,-1,1],[6,-1,-1],[-1,2,-1]]}"#;
const D14: &str = r#"{"vertices": [[-1,-1,1],[-1,-1,-1],[6,-1,-1],[-1,2,-1]]}"#;

#[test]
fn reflexive_exit_codes() {
    let cube = file("cube.json", CUBE);
    let o = run(&["reflexive", "-i", cube.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "true");

    let g = file("gamma1.json", GAMMA1);
    let o = run(&["--json", "reflexive", "-i", g.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["reflexive"], false);
    assert_eq!(v["dual_vertex"].to_string(), "[[3,10],[7,10],[21,10]]");
}

#[test]
fn malformed_input_exits_two() {
    let bad = file("bad.json", r#"{"vertices": [[1,2],[0,0,0]]}"#);
    let o = run(&["reflexive", "-i", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("/vertices/0"));

    let flat = file(
        "flat.json",
        r#"{"vertices": [[1,0,0],[0,1,0],[0,0,0],[1,1,0]]}"#,
    );
    assert_eq!(
        run(&["dual", "-i", flat.to_str().unwrap()]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["ambient", "-w", "1,2,3:6"]).status.code(), Some(2));
    assert_eq!(run(&["ambient", "-w", "1,1,1,1:5"]).status.code(), Some(2));
}

#[test]
fn dual_and_iso() {
    let d = file("d14.json", D14);
    let o = run(&["--json", "dual", "-i", d.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["vertices"].as_array().unwrap().len(), 4);

    let dual = file(
        "d14dual.json",
        r#"{"vertices": [[1,0,0],[0,1,0],[0,0,1],[-6,-14,-21]]}"#,
    );
    let o = run(&[
        "--json",
        "iso",
        "-a",
        dual.to_str().unwrap(),
        "-b",
        d.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["isomorphic"], true);

    let cube = file("cube2.json", CUBE);
    let o = run(&[
        "iso",
        "-a",
        cube.to_str().unwrap(),
        "-b",
        d.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o).trim(), "none");
}

#[test]
fn ambient_and_newton() {
    let o = run(&[
        "ambient",
        "-w",
        "1,3,4,4:12",
        "--basis",
        "-3,1,0,0;-4,0,1,0;-4,0,0,1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o).trim(),
        "(-1,-1,-1) (-1,-1,2) (-1,2,-1) (3,-1,-1)"
    );

    let f = file(
        "f1.json",
        r#"{"weights": [1,3,4,4,12], "monomials": [[12,0,0,0],[0,4,0,0],[0,0,3,0],[0,0,0,3]]}"#,
    );
    let o = run(&[
        "newton",
        "-i",
        f.to_str().unwrap(),
        "--basis",
        "-3,1,0,0;-4,0,1,0;-4,0,0,1",
    ]);
    assert_eq!(
        stdout(&o).trim(),
        "(-1,-1,-1) (-1,-1,2) (-1,2,-1) (3,-1,-1)"
    );

    let o = run(&[
        "ambient",
        "-w",
        "1,3,4,4:12",
        "--basis",
        "-3,1,0,0;-8,0,2,0;-4,0,0,1",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn between_lists_reflexives() {
    let g = file("g1.json", GAMMA1);
    let d = file("d14b.json", D14);
    let o = run(&[
        "--json",
        "between",
        "--inner",
        g.to_str().unwrap(),
        "--outer",
        d.to_str().unwrap(),
    ]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["reflexive"].as_array().unwrap().len(), 1);
}

#[test]
fn coupling_square_check() {
    let o = run(&[
        "--json",
        "coupling",
        "--w",
        "1,4,7:15",
        "--wp",
        "1,4,7:15",
        "--square",
        "11,1,0,1,0,2,0,2,1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["coupled"], true);
    assert_eq!(v["strongly_coupled"], true);
    assert_eq!(v["det"], -45);

    let o = run(&["--json", "coupling", "--w", "1,1,3:10", "--wp", "3,5,11:38"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v.as_array().unwrap().iter().any(|s| s["coupled"] == true));
}

#[test]
fn verify_case_reports() {
    let o = run(&["verify-case", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("-> ok"));

    // exhaustive search finds pairs where none are expected
    let o = run(&["--json", "verify-case", "24"]);
    assert_eq!(o.status.code(), Some(3));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["matches_expectation"], false);
    assert_eq!(v["expected_count"], 0);
    assert_eq!(v["pair_count"], 3);

    let o = run(&["verify-case", "27"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("case 27: 0 pair(s)"));

    assert_eq!(run(&["verify-case", "52"]).status.code(), Some(2));
    assert_eq!(run(&["verify-case"]).status.code(), Some(2));
}

#[test]
fn verify_all_is_deterministic() {
    let a = run(&["--json", "verify-case", "--all"]);
    let b = run(&["--json", "verify-case", "--all"]);
    assert_eq!(a.status.code(), Some(3));
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    let cases = v.as_array().unwrap();
    assert_eq!(cases.len(), 51);
    let bad: Vec<u64> = cases
        .iter()
        .filter(|c| c["matches_expectation"] == false)
        .map(|c| c["case_no"].as_u64().unwrap())
        .collect();
    assert_eq!(bad, vec![24, 39]);
}

#[test]
fn bad_registry_path_is_malformed() {
    let broken = file("reg.json", r#"{"schema": 1, "cases": [{"case_no": 0}]}"#);
    let o = run(&["verify-case", "1", "--registry", broken.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("/cases/0/case_no"));
}
