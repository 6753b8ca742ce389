use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn fracdrift(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fracdrift"))
        .current_dir(dir)
        .env_remove("FRACDRIFT_THREADS")
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn report(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn kernel_table_header() {
    let dir = TempDir::new().unwrap();
    let o = fracdrift(dir.path(), &["kernel", "--family", "mainardi", "--gamma", "0.25", "--output-dir", "out"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = std::fs::read_to_string(dir.path().join("out/rho.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "# family=mainardi gamma=0.25");
    assert_eq!(csv.lines().nth(1).unwrap(), "z,rho1");
}

#[test]
fn levy_second_moment_diverges() {
    let dir = TempDir::new().unwrap();
    let o = fracdrift(dir.path(), &["kernel", "--family", "levy", "--gamma", "0.75", "--moments", "0,1,2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = std::fs::read_to_string(dir.path().join("fracdrift-out/moments.csv")).unwrap();
    let row = text.lines().find(|l| l.starts_with("2,")).unwrap();
    let fields: Vec<&str> = row.split(',').collect();
    assert_eq!(fields[1], "divergent");
    let p: f64 = fields[3].parse().unwrap();
    assert!((p - 7.0 / 3.0).abs() < 0.01, "{p}");
    assert!(stdout(&o).contains("Divergent"));
}

#[test]
fn gamma_out_of_range_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let o = fracdrift(dir.path(), &["kernel", "--gamma", "1.5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("(0, 1)"), "{}", stderr(&o));
    let o = fracdrift(dir.path(), &["kernel", "--family", "levy", "--gamma", "0.4"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("(0.5, 1)"));
}

#[test]
fn green_reports_small_oracle_delta() {
    let dir = TempDir::new().unwrap();
    let o = fracdrift(dir.path(), &["green", "--gamma", "0.5", "--t-end", "50", "--dt", "1e-3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r = report(&dir.path().join("fracdrift-out/green_report.json"));
    assert_eq!(r["schema_version"], 1);
    let delta = &r["checks"][0];
    assert!(delta["check_id"].as_str().unwrap().starts_with("ml_delta"));
    assert!(delta["measured"].as_f64().unwrap() < 1e-4);
}

#[test]
fn green_asymptotic_check_passes() {
    let dir = TempDir::new().unwrap();
    let o = fracdrift(dir.path(), &["green", "--gamma", "0.25", "--probe", "1e4", "--t-end", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r = report(&dir.path().join("fracdrift-out/green_report.json"));
    let check = &r["checks"][1];
    assert_eq!(check["passed"], true);
    assert!((check["target"].as_f64().unwrap() - 0.5516).abs() < 1e-4);
}

#[test]
fn zero_step_is_rejected() {
    let dir = TempDir::new().unwrap();
    assert_eq!(fracdrift(dir.path(), &["green", "--dt", "0"]).status.code(), Some(2));
    assert_eq!(fracdrift(dir.path(), &["simulate-xi", "--paths", "0"]).status.code(), Some(2));
}

#[test]
fn simulate_xi_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let args = ["simulate-xi", "--gamma", "0.75", "--family", "levy", "--paths", "10000", "--seed", "7"];
    let a = fracdrift(dir.path(), &[&args[..], &["--output-dir", "a"]].concat());
    let b = fracdrift(dir.path(), &[&args[..], &["--output-dir", "b"]].concat());
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(b.status.code(), Some(0));
    for f in ["xi_stats.csv", "xi_paths.csv"] {
        let x = std::fs::read(dir.path().join("a").join(f)).unwrap();
        let y = std::fs::read(dir.path().join("b").join(f)).unwrap();
        assert!(x == y, "{f} differs between runs");
    }
    let c = fracdrift(dir.path(), &[&args[..7], &["--seed", "8", "--output-dir", "c"]].concat());
    assert_eq!(c.status.code(), Some(0));
    let x = std::fs::read(dir.path().join("a/xi_stats.csv")).unwrap();
    assert!(x != std::fs::read(dir.path().join("c/xi_stats.csv")).unwrap());
}

#[test]
fn coupled_run_writes_ensemble_and_mass_log() {
    let dir = TempDir::new().unwrap();
    let o = fracdrift(dir.path(), &["simulate-coupled", "--gamma", "0.25", "--lambda", "0.1", "--paths", "2000"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = dir.path().join("fracdrift-out");
    let log = std::fs::read_to_string(out.join("mass_check.log")).unwrap();
    assert_eq!(log.lines().filter(|l| !l.starts_with('#')).count(), 2001);
    for line in log.lines().skip(2) {
        let err: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        assert!(err <= 1e-6);
    }
    assert!(out.join("coupled_stats.csv").exists() && out.join("coupled_paths.csv").exists());
    assert!(stdout(&o).contains("Var X(1)"));
}

#[test]
fn corrupted_config_reports_its_location() {
    let dir = TempDir::new().unwrap();
    std::fs::write(dir.path().join("run.json"), "{\n  \"gamma\": 0.3,\n  \"dt\": oops\n}\n").unwrap();
    let o = fracdrift(dir.path(), &["--config", "run.json", "green"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
    std::fs::write(dir.path().join("typo.json"), r#"{"gama": 0.3}"#).unwrap();
    assert_eq!(fracdrift(dir.path(), &["--config", "typo.json", "kernel"]).status.code(), Some(2));
}

#[test]
fn flags_override_config_values() {
    let dir = TempDir::new().unwrap();
    std::fs::write(dir.path().join("run.json"), r#"{"family": "levy", "gamma": 0.6, "output_dir": "cfg"}"#).unwrap();
    let o = fracdrift(dir.path(), &["--config", "run.json", "kernel", "--gamma", "0.8"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = std::fs::read_to_string(dir.path().join("cfg/rho.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "# family=levy gamma=0.8");
}

#[test]
fn outputs_stay_under_the_output_dir() {
    let dir = TempDir::new().unwrap();
    let o = fracdrift(dir.path(), &["kernel", "--output-dir", "only-here"]);
    assert_eq!(o.status.code(), Some(0));
    let entries: Vec<_> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert_eq!(entries, vec![std::ffi::OsString::from("only-here")]);
}

#[test]
fn thread_count_from_environment() {
    let dir = TempDir::new().unwrap();
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_fracdrift"))
            .current_dir(dir.path())
            .env("FRACDRIFT_THREADS", threads)
            .args(["simulate-xi", "--paths", "50", "--t-end", "1"])
            .output()
            .unwrap()
    };
    assert_eq!(run("2").status.code(), Some(0));
    assert_eq!(run("0").status.code(), Some(2));
    assert_eq!(run("many").status.code(), Some(2));
}

#[test]
fn unknown_subcommand_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    assert_eq!(fracdrift(dir.path(), &["plot"]).status.code(), Some(2));
    assert_eq!(fracdrift(dir.path(), &["--help"]).status.code(), Some(0));
}
