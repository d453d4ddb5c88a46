use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn gmml(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gmml")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Data rows of a CSV: no comments, no header.
fn rows(text: &str) -> Vec<Vec<String>> {
    text.lines().filter(|l| !l.starts_with('#')).skip(1).map(|l| l.split(',').map(String::from).collect()).collect()
}

fn value(cell: &str) -> f64 {
    cell.parse().unwrap()
}

#[test]
fn ml_table() {
    let out = stdout(&gmml(&["ml", "--alpha", "1", "--beta", "1", "--z", "-1,0,1"]));
    let r = rows(&out);
    assert_eq!(value(&r[0][1]), (-1.0f64).exp());
    assert_eq!(value(&r[1][1]), 1.0);
    assert_eq!(value(&r[2][1]), 1.0f64.exp());
    let out = stdout(&gmml(&["ml", "--alpha", "0.5", "--beta", "1", "--z", "-1"]));
    let v = value(&rows(&out)[0][1]);
    assert!((v - 0.427_583_576_155_807).abs() < 1e-14);
}

#[test]
fn exit_codes() {
    assert_eq!(gmml(&["ml", "--alpha", "1", "--bogus"]).status.code(), Some(1));
    assert_eq!(gmml(&["nonsense"]).status.code(), Some(1));
    assert_eq!(gmml(&["--help"]).status.code(), Some(0));
    let cfg = data("exp1.toml");
    let cfg = cfg.to_str().unwrap();
    assert_eq!(gmml(&["density", "--config", cfg, "--grid", "0:1:3"]).status.code(), Some(1));
    assert_eq!(gmml(&["sample", "--config", cfg, "--n", "0"]).status.code(), Some(1));
    let bad = data("bad_generator.toml");
    assert_eq!(gmml(&["density", "--config", bad.to_str().unwrap(), "--grid", "1"]).status.code(), Some(3));
    assert_eq!(gmml(&["density", "--config", "/nonexistent.toml", "--grid", "1"]).status.code(), Some(1));
    // E_{α,β} is out of range for α = 0
    assert_eq!(gmml(&["ml", "--alpha", "0", "--beta", "1", "--z", "1"]).status.code(), Some(1));
}

#[test]
fn density_cdf_laplace() {
    let cfg = data("exp1.toml");
    let cfg = cfg.to_str().unwrap();
    let out = stdout(&gmml(&["density", "--config", cfg, "--grid", "1"]));
    assert!(out.contains("\nx,density\n"));
    assert_eq!(rows(&out), vec![vec!["1.0".to_string(), "0.36787944117144233".to_string()]]);
    let out = stdout(&gmml(&["cdf", "--config", cfg, "--grid", "0.5:2:4"]));
    for r in rows(&out) {
        assert!((value(&r[1]) - (1.0 - (-value(&r[0])).exp())).abs() < 1e-14);
    }
    let out = stdout(&gmml(&["laplace", "--config", cfg, "--grid", "0,1,3"]));
    for r in rows(&out) {
        assert!((value(&r[1]) - 1.0 / (1.0 + value(&r[0]))).abs() < 1e-14);
    }
    // two-dimensional grids are row-major with the last coordinate fastest
    let pw = data("power.toml");
    let out = stdout(&gmml(&["density", "--config", pw.to_str().unwrap(), "--grid", "0.5,1", "--grid", "0.2:0.8:3"]));
    let r = rows(&out);
    assert_eq!(r.len(), 6);
    assert_eq!((r[1][0].as_str(), r[1][1].as_str()), ("0.5", "0.5"));
    assert_eq!((r[3][0].as_str(), r[3][1].as_str()), ("1.0", "0.2"));
}

#[test]
fn sampling_is_deterministic() {
    let cfg = data("orderstat.toml");
    let cfg = cfg.to_str().unwrap();
    let a = stdout(&gmml(&["sample", "--config", cfg, "--n", "500", "--seed", "9"]));
    let b = stdout(&gmml(&["sample", "--config", cfg, "--n", "500", "--seed", "9", "--threads", "4"]));
    let c = stdout(&gmml(&["sample", "--config", cfg, "--n", "500", "--seed", "10"]));
    assert_eq!(a, b);
    assert_ne!(a, c);
    assert!(a.contains("# seed = 9\n") && a.contains("# fingerprint = "));
    assert_eq!(rows(&a).len(), 500);
}

#[test]
fn exponential_sample_mean() {
    let cfg = data("exp1.toml");
    let out = stdout(&gmml(&["sample", "--config", cfg.to_str().unwrap(), "--n", "100000", "--seed", "3"]));
    let xs: Vec<f64> = rows(&out).iter().map(|r| value(&r[0])).collect();
    let mean = xs.iter().sum::<f64>() / xs.len() as f64;
    assert!((mean - 1.0).abs() < 0.01, "{mean}");
}

#[test]
fn figure_one_samples() {
    let cfg = data("fig1.toml");
    let out = stdout(&gmml(&["sample", "--config", cfg.to_str().unwrap(), "--n", "1000", "--seed", "1"]));
    let (x, y): (Vec<f64>, Vec<f64>) = rows(&out).iter().map(|r| (value(&r[0]).ln(), value(&r[1]).ln())).unzip();
    let r = gmml_core::models::pearson(&x, &y).unwrap();
    assert!((r + 0.53).abs() <= 0.1, "{r}");
}

#[test]
fn moments_table() {
    let cfg = data("exp1.toml");
    let out = stdout(&gmml(&["moments", "--config", cfg.to_str().unwrap(), "--theta", "2", "--n", "1000"]));
    assert!((value(&rows(&out)[0][1]) - 2.0).abs() < 1e-12);

    let fig = data("fig3.toml");
    let fig = fig.to_str().unwrap();
    let out = stdout(&gmml(&["moments", "--config", fig, "--theta", "1,1", "--theta", "3,1", "--seed", "2"]));
    let r = rows(&out);
    let (a, mc, se) = (value(&r[0][2]), value(&r[0][3]), value(&r[0][4]));
    assert!((a - mc).abs() <= 3.0 * se, "{a} vs {mc} ± {se}");
    assert_eq!(r[1][2], "inf");
    assert_eq!(r[1][5], "does not exist");
}

#[test]
fn projections() {
    let atom = data("atom.toml");
    let out = stdout(&gmml(&["project", "--config", atom.to_str().unwrap(), "--w", "1,0"]));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!((v["atom"].as_f64().unwrap() - 0.7).abs() < 1e-15);
    assert!(v["max_residual"].as_f64().unwrap() < 1e-12);

    let pos = data("positive.toml");
    let out = stdout(&gmml(&["project", "--config", pos.to_str().unwrap(), "--w", "1,2"]));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["atom"].as_f64().unwrap(), 0.0);
    assert!(v["max_residual"].as_f64().unwrap() < 1e-10);

    assert_eq!(gmml(&["project", "--config", pos.to_str().unwrap(), "--w", "0,0"]).status.code(), Some(1));
}

#[test]
fn figures() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = gmml(&["figure", "fig3", "--out", d, "--seed", "3", "--grid", "0.1:5:20:log"]);
    stdout(&out);
    let s: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("fig3_summary.json")).unwrap()).unwrap();
    assert!((s["observed"].as_f64().unwrap() - 0.35).abs() <= 0.01);
    assert_eq!(s["pass"], serde_json::Value::Bool(true));
    let grid = std::fs::read_to_string(dir.path().join("fig3_density.csv")).unwrap();
    assert_eq!(rows(&grid).len(), 400);

    stdout(&gmml(&["figure", "fig2", "--out", d, "--seed", "2", "--grid", "0.1:5:5:log"]));
    let s: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("fig2_summary.json")).unwrap()).unwrap();
    assert!((s["observed"].as_f64().unwrap() - 0.55).abs() <= 0.1);

    assert_eq!(gmml(&["figure", "fig9", "--out", d]).status.code(), Some(1));
}

#[test]
fn validation_suite() {
    let out = stdout(&gmml(&["validate"]));
    assert!(out.lines().filter(|l| l.starts_with("PASS")).count() >= 15);
    let out = stdout(&gmml(&["validate", "--module", "mlfun"]));
    assert!(out.lines().filter(|l| l.starts_with("PASS") || l.starts_with("FAIL")).all(|l| l.contains(" mlfun.")));
    let corrupted = Command::new(env!("CARGO_BIN_EXE_gmml"))
        .args(["validate", "--module", "mlfun"])
        .env("GMML_TOLERANCES", "mlfun.erfc=1e-30")
        .output()
        .unwrap();
    assert_eq!(corrupted.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&corrupted.stdout).contains("FAIL mlfun.erfc"));
    assert_eq!(gmml(&["validate", "--module", "nope"]).status.code(), Some(1));
}
