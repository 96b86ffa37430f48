use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn nmtr(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nmtr"))
        .args(args)
        .current_dir(cwd)
        .output()
        .unwrap()
}

#[test]
fn run_writes_all_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("cfg.json"),
        r#"{"suite": "table1", "solvers": ["ttr", "nmtr-1", "nmtr-2"], "out_dir": "results"}"#,
    )
    .unwrap();
    let out = nmtr(&["run", "--config", "cfg.json"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let root = dir.path().join("results");
    let results = fs::read_to_string(root.join("results.csv")).unwrap();
    let lines: Vec<&str> = results.lines().collect();
    assert_eq!(lines[0], "problem,solver,ng,nf,status");
    assert_eq!(lines.len(), 1 + 9);
    assert!(lines[1].starts_with("NCR,ttr,"));
    assert!(lines.iter().skip(1).all(|l| l.ends_with(",converged")));

    let trace = fs::read_to_string(root.join("traces").join("MARATOS__nmtr-2.csv")).unwrap();
    assert!(trace.starts_with("k,f,grad_norm,delta,T,ratio,accepted\n"));

    for m in ["ng", "nf", "mixed"] {
        let prof = fs::read_to_string(root.join(format!("profiles_{m}.csv"))).unwrap();
        assert!(prof.starts_with("solver,tau,rho\n"));
        assert_eq!(prof.lines().count(), 1 + 3 * 200);
    }

    // profiling the written results reproduces the file
    let again = nmtr(&["profile", "--results", "results/results.csv", "--measure", "nf"], dir.path());
    assert!(again.status.success());
    assert_eq!(
        String::from_utf8(again.stdout).unwrap(),
        fs::read_to_string(root.join("profiles_nf.csv")).unwrap()
    );
}

#[test]
fn eta_sweep_labels() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("cfg.json"),
        r#"{"solvers": ["nmtr-2"], "eta_sweep": [0.15, 0.45]}"#,
    )
    .unwrap();
    let out = nmtr(&["run", "--config", "cfg.json", "--out", "o", "--workers", "2"], dir.path());
    assert!(out.status.success());
    let results = fs::read_to_string(dir.path().join("o/results.csv")).unwrap();
    assert!(results.contains("NCR,nmtr-2-0.15,"));
    assert!(results.contains("NONDIA,nmtr-2-0.45,"));
}

#[test]
fn config_errors_exit_with_1() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bad.json"), r#"{"solvers": ["newton"]}"#).unwrap();
    let out = nmtr(&["run", "--config", "bad.json"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("newton"));

    let out = nmtr(&["run", "--config", "missing.json"], dir.path());
    assert_eq!(out.status.code(), Some(1));

    fs::write(dir.path().join("suite.json"), r#"{"suite": "cutest"}"#).unwrap();
    assert_eq!(nmtr(&["run", "--config", "suite.json"], dir.path()).status.code(), Some(1));

    assert_eq!(nmtr(&["verify", "--suite", "nope"], dir.path()).status.code(), Some(1));
}

#[test]
fn verify_passes_on_table1() {
    let dir = tempfile::tempdir().unwrap();
    let out = nmtr(&["verify", "--suite", "table1"], dir.path());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(out.status.success(), "{text}");
    assert!(text.contains("PASS  gradient NCR"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn problems_listing() {
    let dir = tempfile::tempdir().unwrap();
    let out = nmtr(&["problems", "--suite", "classic"], dir.path());
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v.as_array().unwrap().len() >= 20);
}
