use std::process::{Command, Output};

use serde_json::Value;

fn hecke(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hecke")).args(args).env_remove("HECKE_THREADS").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn symbol_command() {
    let o = hecke(&["symbol", "--a", "0,1", "--n", "-1,2"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("quadratic=-1"));
    let o = hecke(&["symbol", "--a", "1,0", "--n", "-1,2"]);
    assert_eq!(stdout(&o), "quartic=1\nquadratic=1\n");
    let o = hecke(&["symbol", "--a", "1,0", "--n", "2,2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("odd"));
    assert_eq!(hecke(&["symbol", "--a", "x", "--n", "1,0"]).status.code(), Some(2));
}

#[test]
fn s2_both_reports_discrepancy() {
    let o = hecke(&["s2", "--x", "200", "--y", "20", "--method", "both"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let err = stderr(&o);
    let rel: f64 = err.split("relative=").nth(1).unwrap().trim().parse().unwrap();
    assert!(rel <= 1e-6);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["schema"], "hecke-sum/1");
    assert!(v["results"]["discrepancy"]["relative"].as_f64().unwrap() <= 1e-6);
}

#[test]
fn s2_large_poisson_run() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let o = hecke(&["s2", "--x", "1e6", "--y", "1e2", "--method", "poisson", "--out", path.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert!(v["results"]["m0"].as_f64().unwrap() > 0.0);
    assert_eq!(v["results"]["candidates"].as_object().unwrap().len(), 3);
    assert!(v["results"]["s2_direct"].is_null());
}

#[test]
fn usage_errors() {
    assert_eq!(hecke(&["s2", "--x", "200"]).status.code(), Some(2));
    assert_eq!(hecke(&["s2", "--x", "200", "--y", "-3"]).status.code(), Some(2));
    assert_eq!(hecke(&["s2", "--x", "200", "--y", "20", "--method", "fast"]).status.code(), Some(2));
    assert_eq!(hecke(&["verify", "--suite", "everything"]).status.code(), Some(2));
    assert_eq!(hecke(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(hecke(&["scan", "--x-grid", "100", "--y-rule", "fixed:10", "--method", "both"]).status.code(), Some(2));
}

#[test]
fn budget_exhaustion_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.conf");
    std::fs::write(&cfg, "direct_budget = 100\n").unwrap();
    let o = hecke(&["s2", "--config", cfg.to_str().unwrap(), "--x", "500", "--y", "50", "--method", "direct"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("poisson"));
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.conf");
    std::fs::write(&cfg, "# run\nx = 300\ny = 20\nmethod = direct\n").unwrap();
    let o = hecke(&["s2", "--config", cfg.to_str().unwrap(), "--y", "30", "--timings", "off"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["config"]["x"], "300");
    assert_eq!(v["config"]["y"], "30");
    assert_eq!(v["config"]["method"], "direct");

    // The embedded config reproduces the run byte for byte.
    let text: String =
        v["config"].as_object().unwrap().iter().map(|(k, x)| format!("{k} = {}\n", x.as_str().unwrap())).collect();
    std::fs::write(&cfg, text).unwrap();
    let again = hecke(&["s2", "--config", cfg.to_str().unwrap()]);
    assert_eq!(stdout(&again), stdout(&o));

    std::fs::write(&cfg, "x 300\n").unwrap();
    assert_eq!(hecke(&["s2", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn thread_env_does_not_change_output() {
    let args = ["s2", "--x", "2000", "--y", "100", "--timings", "off"];
    let a = Command::new(env!("CARGO_BIN_EXE_hecke")).args(args).env("HECKE_THREADS", "1").output().unwrap();
    let b = Command::new(env!("CARGO_BIN_EXE_hecke")).args(args).env("HECKE_THREADS", "3").output().unwrap();
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
    let bad = Command::new(env!("CARGO_BIN_EXE_hecke")).args(args).env("HECKE_THREADS", "many").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn scan_rows_follow_y_rule() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.csv");
    let o = hecke(&[
        "scan", "--x-grid", "geometric:400:6400:3", "--y-rule", "power:0.5", "--method", "poisson",
        "--out", path.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = std::fs::read_to_string(path).unwrap();
    let rows: Vec<Vec<f64>> = text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with('X'))
        .map(|l| l.split(',').map(|f| f.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 3);
    for (r, x) in rows.iter().zip([400.0, 1600.0, 6400.0]) {
        assert_eq!(r[0], x);
        assert_eq!(r[1], x.sqrt());
    }
}

#[test]
fn verify_gauss_passes() {
    let o = hecke(&["verify", "--suite", "gauss"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], true);
}
