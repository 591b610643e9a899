use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const WORKED: &str = r#"{"alpha": 0.5, "p": 2, "T": 1, "N": 16, "phi": "exp(-50*(x-1)^2)"}"#;

fn fracdyn(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fracdyn"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn with_config(json: &str) -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("run.json"), json).unwrap();
    dir
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn certify_worked_example() {
    let dir = with_config(WORKED);
    let o = fracdyn(&["certify", "--config", "run.json", "--out", "out"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let cert: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("out/certificate.json")).unwrap()).unwrap();
    let obj = cert.as_object().unwrap();
    let mut keys: Vec<&str> = obj.keys().map(String::as_str).collect();
    keys.sort();
    assert_eq!(keys, ["C1", "C2", "M", "P", "Q", "delta", "k_rule", "lambda"]);
    assert_eq!(cert["M"].as_f64(), Some(8.0));
    assert!((cert["delta"].as_f64().unwrap() - 0.012_271_846_303_085_15).abs() < 1e-15);
}

#[test]
fn solve_with_zero_data_writes_zero_trajectory() {
    let dir = with_config(r#"{"alpha": 0.5, "p": 2, "T": 0.05, "N": 5, "phi": "0", "F": "0", "h": 0.01}"#);
    let o = fracdyn(&["solve", "--config", "run.json", "--out", "out"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = fs::read_to_string(dir.path().join("out/trajectory.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("t,u_1,u_2,u_3,u_4,u_5"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 6);
    for row in rows {
        for cell in row.split(',').skip(1) {
            assert_eq!(cell.parse::<f64>().unwrap(), 0.0);
        }
    }
    let report: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("out/report.json")).unwrap()).unwrap();
    assert_eq!(report["iterations"].as_u64(), Some(1));
    assert!(report.get("solution").is_none());
}

#[test]
fn identical_configs_give_identical_bytes() {
    let cfg = r#"{"alpha": 0.75, "p": 3, "T": 0.02, "N": 6, "phi": "2^(-x)", "h": 0.002, "r": "1 + 0.5*sin(t)"}"#;
    let dir = with_config(cfg);
    for out in ["a", "b"] {
        let o = fracdyn(&["solve", "--config", "run.json", "--out", out], dir.path());
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    }
    for f in ["trajectory.csv", "report.json"] {
        let a = fs::read(dir.path().join("a").join(f)).unwrap();
        let b = fs::read(dir.path().join("b").join(f)).unwrap();
        assert_eq!(a, b, "{f}");
    }
}

#[test]
fn validation_errors_exit_one_with_field_messages() {
    let dir = with_config(r#"{"alpha": 1.5, "p": 2, "T": 1, "N": 8, "phi": "0"}"#);
    let o = fracdyn(&["certify", "--config", "run.json"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("alpha must lie in (0,1]"), "{}", stderr(&o));

    let dir = with_config(r#"{"alpha": 0.5, "p": 1.5, "T": 1, "N": 8, "phi": "0"}"#);
    let o = fracdyn(&["certify", "--config", "run.json"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("p must be ≥ 2"));

    let o = fracdyn(&["solve"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("--config is required"));

    let o = fracdyn(&["launch"], dir.path());
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn uncertifiable_data_is_refused_by_certify() {
    let dir = with_config(r#"{"alpha": 0.5, "p": 2, "T": 1, "N": 8, "phi": "0", "r": "0"}"#);
    let o = fracdyn(&["certify", "--config", "run.json", "--out", "out"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("degenerate bound"));
    assert!(!dir.path().join("out/certificate.json").exists());
}

#[test]
fn non_convergence_exits_two_without_outputs() {
    let dir = with_config(r#"{"alpha": 0.5, "p": 2, "T": 1, "N": 8, "phi": "2^(-x)", "max_iter": 3}"#);
    let o = fracdyn(&["solve", "--config", "run.json", "--out", "out"], dir.path());
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    assert!(stderr(&o).contains("did not converge"));
    assert!(!dir.path().join("out/trajectory.csv").exists());
    assert!(!dir.path().join("out/report.json").exists());
}

#[test]
fn sweep_table() {
    let dir = with_config(
        r#"{"alpha": 0.5, "p": 2, "T": 0.1, "N": 8, "phi": "2^(-x)", "h": 0.002, "tol": 1e-10,
            "sweep": {"N": [8, 16, 32], "h": [0.004, 0.002]}}"#,
    );
    let o = fracdyn(&["sweep", "--config", "run.json", "--out", "."], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "study,N,N_next,h,sup_diff");
    assert_eq!(lines.len(), 5);
    let diff = |l: &str| l.rsplit(',').next().unwrap().parse::<f64>().unwrap();
    assert!(diff(lines[2]) <= diff(lines[1]));
    assert_eq!(diff(lines[4]), 0.0);
}

#[test]
fn mnc_runs_without_config() {
    let dir = tempfile::tempdir().unwrap();
    let o = fracdyn(&["mnc", "--out", "out"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("out/mnc_report.json")).unwrap()).unwrap();
    let kernel = r["kernel_inequality"].as_array().unwrap();
    assert_eq!(kernel.len(), 40);
    assert!(kernel.iter().all(|k| k["holds"] == Value::Bool(true)));
    let failed: Vec<&Value> = r["sup_norm_measure"]["results"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|x| x["passed"] == Value::Bool(false))
        .collect();
    assert_eq!(failed.len(), 1);
    assert_eq!(failed[0]["axiom"], "Singleton");
}

#[test]
fn kamke_linear_scan() {
    let dir = with_config(
        r#"{"alpha": 0.5, "p": 2, "T": 1, "N": 8, "phi": "0", "h": 0.01, "tol": 1e-10,
            "kamke": {"H": 1, "lambda": 1, "eps": [0.01, 0.001, 0.0001]}}"#,
    );
    let o = fracdyn(&["kamke", "--config", "run.json", "--out", "out"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("out/kamke.json")).unwrap()).unwrap();
    let ratios: Vec<f64> = r["scan"]["ratios"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    assert_eq!(ratios.len(), 3);
    assert!(ratios.iter().all(|x| (x - ratios[0]).abs() < 1e-8));
}

#[test]
fn selftest_passes_on_a_clean_build() {
    let dir = tempfile::tempdir().unwrap();
    let o = fracdyn(&["selftest"], dir.path());
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert_eq!(o.status.code(), Some(0), "{stdout}{}", stderr(&o));
    assert_eq!(stdout.lines().filter(|l| l.starts_with("PASS")).count(), 11);
}
