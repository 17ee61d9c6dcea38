use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn hyperpoly(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperpoly"))
        .arg("--out")
        .arg(out)
        .args(args)
        .env_remove("HYPERPOLY_OUT")
        .output()
        .expect("binary runs")
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r.records().map(|rec| rec.unwrap().iter().map(String::from).collect()).collect();
    (header, rows)
}

fn read_jsonl(path: &Path) -> Vec<serde_json::Map<String, Value>> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str::<Value>(l).unwrap().as_object().unwrap().clone())
        .collect()
}

#[test]
fn classify_ou_drift_blows_up_past_one_plus_e() {
    let dir = tempfile::tempdir().unwrap();
    let out = hyperpoly(
        dir.path(),
        &["classify", "--model", "ou", "--bernstein", r#"{"a":0,"b":0.5}"#, "--t", "1", "--p", "2", "--q", "4"],
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = read_jsonl(&dir.path().join("classify.jsonl"));
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["verdict"], "blow-up");
    let threshold = rows[0]["threshold"].as_f64().unwrap();
    assert!((threshold - (1.0 + std::f64::consts::E)).abs() < 1e-15);
}

#[test]
fn classify_at_q_equal_p_is_bounded_with_killing_norm() {
    let dir = tempfile::tempdir().unwrap();
    let out = hyperpoly(
        dir.path(),
        &[
            "classify", "--model", "ou", "--bernstein", r#"{"a":0.3,"b":0.5}"#, "--t", "2", "--p", "2", "--q", "2",
            "--expect", "bounded",
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    let rows = read_jsonl(&dir.path().join("classify.jsonl"));
    assert_eq!(rows[0]["verdict"], "bounded");
    assert_eq!(rows[0]["norm"].as_f64().unwrap(), (-0.6f64).exp());
}

#[test]
fn hermite_norm_table_passes_every_row() {
    let dir = tempfile::tempdir().unwrap();
    let out = hyperpoly(dir.path(), &["--format", "csv", "norms", "--family", "hermite", "--q", "4", "--n", "1..60"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let (header, rows) = read_csv(&dir.path().join("norms-hermite.csv"));
    assert_eq!(header.last().map(String::as_str), Some("pass"));
    assert_eq!(rows.len(), 60);
    assert!(rows.iter().all(|r| r.last().unwrap() == "true"));
    assert!(!dir.path().join("norms-hermite.jsonl").exists());
}

#[test]
fn json_lines_mirror_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = hyperpoly(dir.path(), &["kernel", "--t", "0.5,1", "--lambda", "0,2"]);
    assert_eq!(out.status.code(), Some(0));
    let (header, rows) = read_csv(&dir.path().join("kernel.csv"));
    let json = read_jsonl(&dir.path().join("kernel.jsonl"));
    assert_eq!(rows.len(), 4);
    assert_eq!(json.len(), rows.len());
    for (row, obj) in rows.iter().zip(&json) {
        assert_eq!(obj.keys().cloned().collect::<Vec<_>>(), header);
        for (cell, (_, v)) in row.iter().zip(obj) {
            match v {
                Value::Number(x) => assert_eq!(cell.parse::<f64>().unwrap(), x.as_f64().unwrap()),
                Value::Bool(b) => assert_eq!(cell, &b.to_string()),
                other => panic!("unexpected {other}"),
            }
        }
    }
}

#[test]
fn configuration_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["norms", "--q", "2"][..],
        &["classify", "--model", "ou", "--bernstein", "stable:1.5", "--p", "2", "--q", "3"],
        &["classify", "--model", "laguerre", "--alpha", "-0.8", "--p", "2", "--q", "2"],
        &["rates", "--p", "1.5"],
        &["limits", "--level", "10", "--q", "2"],
        &["bounds", "--frobnicate"],
    ] {
        let out = hyperpoly(dir.path(), args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn failed_certification_exits_with_one_and_lists_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = hyperpoly(dir.path(), &["bilinear", "--bernstein", "drift:0.5", "--q", "4", "--expect", "bounded"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("failing rows in bilinear"), "{err}");
    // the table is still written for inspection
    assert!(dir.path().join("bilinear.csv").exists());
}

#[test]
fn stdout_mode_writes_tables_to_stdout() {
    let out = Command::new(env!("CARGO_BIN_EXE_hyperpoly"))
        .args(["--out", "-", "--format", "csv", "classify", "--model", "laguerre", "--p", "2", "--q", "3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("model,alpha,a,b,t,p,q,threshold,verdict,norm,discriminant,pass\nlaguerre,0.0,"));
    assert!(text.contains(",blow-up,inf,"));
}

#[test]
fn output_directory_defaults_to_environment() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("from-env");
    let out = Command::new(env!("CARGO_BIN_EXE_hyperpoly"))
        .args(["kernel", "--t", "1", "--lambda", "1"])
        .env("HYPERPOLY_OUT", &target)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(target.join("kernel.csv").exists());
}

#[test]
fn certify_all_passes_and_reruns_byte_identically() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let first = hyperpoly(a.path(), &["certify-all"]);
    assert_eq!(first.status.code(), Some(0), "{}", String::from_utf8_lossy(&first.stderr));
    assert_eq!(hyperpoly(b.path(), &["certify-all"]).status.code(), Some(0));
    let mut names: Vec<_> = fs::read_dir(a.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert_eq!(names.len(), 38);
    for name in names {
        let x = fs::read(a.path().join(&name)).unwrap();
        let y = fs::read(b.path().join(&name)).unwrap();
        assert!(x == y, "{name:?} differs between runs");
    }
}
