use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_degspec"))
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn run_args(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn fibonacci_request_passes() {
    let out = run_args(&["run", fixture("fibonacci.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("\"verdict\": \"PASS\""));
    assert!(text.contains("2.61803398875"));
    assert!(text.contains("\"stable_up_to\": 20"));
}

#[test]
fn cremona_request_with_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("seq.csv");
    let out = run_args(&[
        "run",
        fixture("cremona.json").to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let body = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = body.trim_end().lines().collect();
    assert_eq!(lines[0], "n,value,root");
    let values: Vec<&str> = lines[1..]
        .iter()
        .map(|l| l.split(',').nth(1).unwrap())
        .collect();
    assert_eq!(values, vec!["2", "1", "2", "1", "2", "1", "2", "1"]);
}

#[test]
fn missing_request_file_is_input_error() {
    let out = run_args(&["run", "no-such-file.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error:"));
}

#[test]
fn models_lists_builtins() {
    let out = run_args(&["models"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for name in ["P2", "(P1)^3", "BlP2(3)", "BlP3pt", "BlP3line"] {
        assert!(text.contains(name), "missing {name}");
    }
}

#[test]
fn validate_accepts_and_rejects() {
    let ok = run_args(&["validate", fixture("cremona.json").to_str().unwrap()]);
    assert_eq!(ok.status.code(), Some(0));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"analyses":[{"kind":"frobnicate"}]}"#).unwrap();
    let out = run_args(&["validate", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("frobnicate"));
}

#[test]
fn inline_flags_work_without_request_file() {
    let out = run_args(&[
        "run",
        "--map",
        r#"{"type":"monomial","A":[[2,1],[1,1]]}"#,
        "--check",
        "degrees,theorem1",
        "--nmax",
        "5",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("\"values\""));
    assert!(text.contains("\"verdict\": \"PASS\""));
}

#[test]
fn inconsistent_assertion_exits_two() {
    let out = run_args(&[
        "run",
        "--map",
        r#"{"type":"matrix_action","model":"(P1)^2",
            "M":{"1":[["0","1"],["1","0"]],"2":[["4"]]}}"#,
        "--check",
        "theorem2",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("CONCLUSION_VIOLATED"));
}

#[test]
fn borderline_modulus_exits_three() {
    let out = run_args(&[
        "run",
        "--map",
        r#"{"type":"matrix_action","model":"(P1)^2",
            "M":{"1":[["2","0"],["0","1"]],"2":[["1"]]}}"#,
        "--check",
        "theorem1",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stdout(&out).contains("INDETERMINATE"));
}

#[test]
fn output_is_deterministic() {
    let path = fixture("fibonacci.json");
    let args = ["run", path.to_str().unwrap()];
    let a = run_args(&args);
    let b = run_args(&args);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn report_file_via_out_flag() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("report.json");
    let out = run_args(&[
        "run",
        fixture("duality.json").to_str().unwrap(),
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).is_empty());
    let body = std::fs::read_to_string(&out_path).unwrap();
    let parsed: serde_json::Value = serde_json::from_str(&body).unwrap();
    assert_eq!(parsed["analyses"][0]["result"]["verdict"], "PASS");
}
