use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn qverify(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qverify"))
        .args(args)
        .output()
        .expect("spawn qverify")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is json")
}

fn csv_rows(out: &Output) -> Vec<Vec<String>> {
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("axis,margin_mean,agree_rate,depth,paper_depth,parallel,wall_ms")
    );
    lines
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn verify_forall_exists_agrees() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "f.qf", "forall x[1]\nexists y[1] : p\n");
    let t = write(dir.path(), "t.tt", "vars x[1] y[1]\n0110\n");
    let json = dir.path().join("r.json");
    let out = qverify(&["verify", "--formula", s(&f), "--oracle", s(&t), "--M", "3", "--json", s(&json)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&out);
    assert_eq!(r["classical_truth"], true);
    assert_eq!(r["decided"], true);
    assert!(r["gamma_prob"].as_f64().unwrap() > 0.5);
    let saved: Value = serde_json::from_str(&fs::read_to_string(json).unwrap()).unwrap();
    assert_eq!(saved["gamma_prob"], r["gamma_prob"]);
}

#[test]
fn verify_all_zero_predicate_gives_zero() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "f.qf", "exists x[2] : p\n");
    let t = write(dir.path(), "t.tt", "vars x[2]\n0000\n");
    let out = qverify(&["verify", "--formula", s(&f), "--oracle", s(&t)]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert!(r["gamma_prob"].as_f64().unwrap().abs() < 1e-12);
    assert_eq!(r["classical_truth"], false);
}

#[test]
fn verify_with_free_assignment() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "f.qf", "free z[1]\nexists x[2] : p\n");
    let t = write(dir.path(), "t.tt", "vars z[1] x[2]\n00000100\n");
    for (z, truth) in [("0", false), ("1", true)] {
        let a = format!("z={z}");
        let out = qverify(&["verify", "--formula", s(&f), "--oracle", s(&t), "--assign", &a]);
        assert_eq!(out.status.code(), Some(0));
        assert_eq!(report(&out)["classical_truth"], truth);
    }
    let out = qverify(&["verify", "--formula", s(&f), "--oracle", s(&t)]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn shots_are_reproducible() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "f.qf", "exists x[2] : p\n");
    let t = write(dir.path(), "t.tt", "vars x[2]\n0010\n");
    let args = ["verify", "--formula", s(&f), "--oracle", s(&t), "--shots", "500", "--seed", "9"];
    let a = report(&qverify(&args));
    let b = report(&qverify(&args));
    assert_eq!(a["samples"], b["samples"]);
    let ones = a["samples"]["ones"].as_u64().unwrap() as f64;
    let p = a["gamma_prob"].as_f64().unwrap();
    assert!((ones / 500.0 - p).abs() < 0.1);
}

#[test]
fn missing_oracle_file_exits_one() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "f.qf", "exists x[1] : p\n");
    let missing = dir.path().join("nope.tt");
    let out = qverify(&["verify", "--formula", s(&f), "--oracle", s(&missing)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
}

#[test]
fn parse_error_exits_one_with_position() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "f.qf", "exists exists : p\n");
    let t = write(dir.path(), "t.tt", "vars x[1]\n01\n");
    let out = qverify(&["verify", "--formula", s(&f), "--oracle", s(&t)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("1:8"));
}

#[test]
fn sweep_over_blocks_tracks_one_minus_failure_power() {
    let out = qverify(&[
        "sweep", "--axis", "M", "--values", "1,2,3,4", "--pattern", "E", "--width", "2",
        "--solutions", "1", "--seeds", "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    for row in csv_rows(&out) {
        let m: i32 = row[0].parse().unwrap();
        let margin: f64 = row[1].parse().unwrap();
        let want = 1.0 - 0.375f64.powi(m) - 0.5;
        assert!((margin - want).abs() < 1e-9, "M={m}: {margin} vs {want}");
        assert_eq!(row[2], "1");
        assert_eq!(row[5], m.to_string());
    }
}

#[test]
fn sweep_depth_follows_square_root() {
    let out = qverify(&[
        "sweep", "--axis", "n", "--values", "2,4", "--pattern", "E", "--solutions", "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let depths: Vec<String> = csv_rows(&out).into_iter().map(|r| r[3].clone()).collect();
    assert_eq!(depths, ["2", "4"]);
}

#[test]
fn sweep_density_zero_always_agrees() {
    let out = qverify(&[
        "sweep", "--axis", "density", "--values", "0", "--pattern", "AE", "--width", "1",
        "--seeds", "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    for row in csv_rows(&out) {
        assert_eq!(row[2], "1");
    }
}

#[test]
fn sweep_is_deterministic() {
    let args = [
        "sweep", "--axis", "density", "--values", "0.25,0.5", "--pattern", "EA", "--width", "1",
        "--seeds", "2", "--seed", "5",
    ];
    let strip = |o: Output| -> Vec<Vec<String>> {
        csv_rows(&o).into_iter().map(|mut r| { r.pop(); r }).collect()
    };
    assert_eq!(strip(qverify(&args)), strip(qverify(&args)));
}

#[test]
fn bad_axis_is_rejected() {
    let out = qverify(&["sweep", "--axis", "q", "--values", "1"]);
    assert_eq!(out.status.code(), Some(1));
}
