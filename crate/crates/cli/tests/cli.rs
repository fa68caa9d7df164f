//! End-to-end tests driving the `turnover` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_turnover")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

struct Workdir(PathBuf);

impl Workdir {
    fn new(tag: &str) -> Self {
        let dir = std::env::temp_dir().join(format!("turnover-cli-{tag}-{}", std::process::id()));
        std::fs::create_dir_all(&dir).expect("temp dir");
        Workdir(dir)
    }

    fn file(&self, name: &str, content: &str) -> PathBuf {
        let path = self.0.join(name);
        std::fs::write(&path, content).expect("write file");
        path
    }

    fn path(&self, name: &str) -> PathBuf {
        self.0.join(name)
    }
}

impl Drop for Workdir {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.0);
    }
}

const HEADLINE: &str = r#"{"k":2,"b":[4,1],"d":[1,0.3],"kernel":{"type":"logistic","K":1}}"#;

#[test]
fn periodic_reports_the_reference_orbit() {
    let dir = Workdir::new("periodic");
    let config = dir.file("m.json", HEADLINE);
    let out = run(&["periodic", "--config", config.to_str().unwrap(), "--search"]);
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );

    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert!((json["c1"].as_f64().unwrap() - 0.342_179).abs() < 1e-5);
    assert!((json["theta"].as_f64().unwrap() - 1.218_820).abs() < 1e-5);
    assert_eq!(json["conditions"]["p_interval"], true);
    assert_eq!(json["config"]["kernel"]["type"], "logistic");
    let found = json["search"].as_array().unwrap();
    assert_eq!(found.len(), 1);
    assert!(json["residual"].as_f64().unwrap() < 1e-10);
}

#[test]
fn periodic_no_orbit_names_the_failed_condition() {
    let dir = Workdir::new("noorbit");
    let config = dir.file(
        "m.json",
        r#"{"k":2,"b":[2.02,0.505],"d":[0.0399,0.01],"kernel":{"type":"logistic","K":1}}"#,
    );
    let out = run(&["periodic", "--config", config.to_str().unwrap()]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(json["orbit"].is_null());
    assert_eq!(json["failed"], "p-interval");
}

#[test]
fn tied_turnover_exits_with_input_error() {
    let dir = Workdir::new("tied");
    let config = dir.file(
        "m.json",
        r#"{"k":2,"b":[2,1],"d":[1,0.5],"kernel":{"type":"logistic","K":1}}"#,
    );
    let target = dir.path("report.json");
    let out = run(&[
        "exclusion",
        "--config",
        config.to_str().unwrap(),
        "--out",
        target.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("tied"));
    assert!(!target.exists(), "failed run must not create output files");
}

#[test]
fn invalid_config_produces_no_output_file() {
    let dir = Workdir::new("invalid");
    let config = dir.file(
        "m.json",
        r#"{"k":2,"b":[2,1],"d":[1.5,0.2],"kernel":{"type":"logistic","K":1}}"#,
    );
    let target = dir.path("report.json");
    let out = run(&[
        "equilibria",
        "--config",
        config.to_str().unwrap(),
        "--out",
        target.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!target.exists());
}

#[test]
fn simulate_emits_csv_rows_and_extinction_json() {
    let dir = Workdir::new("simulate");
    let config = dir.file("m.json", HEADLINE);
    let out = run(&[
        "simulate",
        "--config",
        config.to_str().unwrap(),
        "--steps",
        "1000",
        "--x0",
        "0.5,0.3",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,x1,x2");
    assert_eq!(lines.len(), 1002, "header plus 1001 rows");

    // File mode: CSV and JSON land in files, stdout stays quiet.
    let csv = dir.path("t.csv");
    let json = dir.path("e.json");
    let out = run(&[
        "simulate",
        "--config",
        config.to_str().unwrap(),
        "--steps",
        "100",
        "--x0",
        "0.5,0.3",
        "--csv",
        csv.to_str().unwrap(),
        "--json",
        json.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).is_empty());
    let parsed: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(parsed["extinct"], serde_json::json!([false, false]));
    assert_eq!(parsed["config"]["steps"], 100);
    assert_eq!(std::fs::read_to_string(&csv).unwrap().lines().count(), 102);
}

#[test]
fn extinction_verdict_for_excluded_pair() {
    let dir = Workdir::new("extinct");
    let config = dir.file(
        "m.json",
        r#"{"k":2,"b":[2,3],"d":[0.5,0.9],"kernel":{"type":"logistic","K":1},"x0":[0.3,0.3],"steps":2000,"tol":1e-6}"#,
    );
    let json = dir.path("e.json");
    let out = run(&[
        "simulate",
        "--config",
        config.to_str().unwrap(),
        "--csv",
        dir.path("t.csv").to_str().unwrap(),
        "--json",
        json.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let parsed: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(parsed["extinct"], serde_json::json!([false, true]));
    // With the weaker strategy gone, the dominant coordinate shadows the
    // reduced map.
    assert!(parsed["pseudo_orbit"]["residual"].as_f64().unwrap() < 1e-6);
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dir = Workdir::new("determinism");
    let config = dir.file("m.json", HEADLINE);
    for args in [
        vec!["periodic", "--config", config.to_str().unwrap(), "--search"],
        vec![
            "simulate",
            "--config",
            config.to_str().unwrap(),
            "--steps",
            "500",
            "--x0",
            "0.5,0.3",
        ],
        vec!["equilibria", "--config", config.to_str().unwrap()],
    ] {
        let a = run(&args);
        let b = run(&args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "run of {args:?} not reproducible");
    }
}

#[test]
fn continuous_reports_slope_deviation() {
    let dir = Workdir::new("continuous");
    let config = dir.file("m.json", HEADLINE);
    let csv = dir.path("c.csv");
    let json = dir.path("s.json");
    let out = run(&[
        "continuous",
        "--config",
        config.to_str().unwrap(),
        "--x0",
        "0.3,0.3",
        "--t-max",
        "10",
        "--dt",
        "0.01",
        "--csv",
        csv.to_str().unwrap(),
        "--json",
        json.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("time,x1,x2\n"));
    assert_eq!(text.lines().count(), 1002);
    let parsed: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    let check = &parsed["slope_checks"][0];
    assert!((check["slope"].as_f64().unwrap() - 0.2).abs() < 1e-12);
    assert!(check["deviation"].as_f64().unwrap() < 1e-7);
}

#[test]
fn consistency_agrees_for_valid_steps() {
    let dir = Workdir::new("consistency");
    let config = dir.file(
        "m.json",
        r#"{"k":2,"b":[1,2],"d":[0.2,0.5],"kernel":{"type":"logistic","K":1},"continuous":true,"x0":[0.3,0.3]}"#,
    );
    let out = run(&[
        "consistency",
        "--config",
        config.to_str().unwrap(),
        "--h",
        "1",
    ]);
    assert!(out.status.success());
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(parsed["agree"], true);
    assert_eq!(parsed["condition"], serde_json::json!([true]));
    assert_eq!(
        parsed["continuous_extinct"],
        serde_json::json!([false, true])
    );

    // Oversized step: rejected as invalid input.
    let out = run(&[
        "consistency",
        "--config",
        config.to_str().unwrap(),
        "--h",
        "2.5",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn seqlab_sequences_satisfy_the_recurrence() {
    let out = run(&["seqlab", "--alpha", "4", "--beta", "0.0001", "--n", "8"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("n,u,v\n"));
    assert_eq!(text.lines().count(), 9);
    let v1: f64 = text
        .lines()
        .nth(2)
        .unwrap()
        .split(',')
        .nth(2)
        .unwrap()
        .parse()
        .unwrap();
    assert!((v1 - 1.004_091_0).abs() < 1e-6);

    // Subcritical coefficients cannot produce the sequences.
    let out = run(&["seqlab", "--alpha", "1.2", "--beta", "0.5"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn sweep_emits_one_row_per_grid_point_with_errors_inline() {
    let dir = Workdir::new("sweep");
    let config = dir.file("m.json", HEADLINE);
    // d1 sweep crossing d1 = 1 makes the tail points invalid; rows must
    // still appear with the error recorded.
    let out = run(&[
        "sweep",
        "--config",
        config.to_str().unwrap(),
        "--analysis",
        "exclusion",
        "--param",
        "d1",
        "--from",
        "0.8",
        "--to",
        "1.2",
        "--points",
        "5",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "index,d1,verdict,detail,error");
    assert_eq!(lines.len(), 6);
    assert!(lines[1].contains("possibly-coexisting"));
    let bad_rows = lines[1..]
        .iter()
        .filter(|l| l.contains("death rate"))
        .count();
    assert_eq!(bad_rows, 2, "d1 = 1.1 and 1.2 are invalid: {text}");

    // Two-parameter sweep: points x points2 rows.
    let out = run(&[
        "sweep",
        "--config",
        config.to_str().unwrap(),
        "--analysis",
        "periodic",
        "--param",
        "b1",
        "--from",
        "3.5",
        "--to",
        "4.5",
        "--points",
        "3",
        "--param2",
        "d2",
        "--from2",
        "0.2",
        "--to2",
        "0.4",
        "--points2",
        "4",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 13);
    assert!(text.lines().nth(1).unwrap().split(',').count() == 6);
}

#[test]
fn sweep_equilibria_tracks_the_stability_flip() {
    let dir = Workdir::new("sweepstab");
    let config = dir.file(
        "m.json",
        r#"{"k":1,"b":[1.5],"d":[0.5],"kernel":{"type":"logistic","K":1}}"#,
    );
    let out_path = dir.path("scan.csv");
    // The dominant axis point flips at b1 = 2 + d1 = 2.5.
    let out = run(&[
        "sweep",
        "--config",
        config.to_str().unwrap(),
        "--analysis",
        "equilibria",
        "--param",
        "b1",
        "--from",
        "2.0",
        "--to",
        "3.0",
        "--points",
        "5",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).is_empty());
    let text = std::fs::read_to_string(&out_path).unwrap();
    let verdicts: Vec<&str> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(2).unwrap())
        .collect();
    assert_eq!(
        verdicts,
        vec![
            "locally-stable",
            "locally-stable",
            "marginal",
            "unstable",
            "unstable"
        ],
        "{text}"
    );
}

#[test]
fn config_document_supplies_defaults_and_flags_override() {
    let dir = Workdir::new("precedence");
    let config = dir.file(
        "m.json",
        r#"{"k":2,"b":[4,1],"d":[1,0.3],"kernel":{"type":"logistic","K":1},"steps":50,"x0":[0.5,0.3]}"#,
    );
    let out = run(&["simulate", "--config", config.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).lines().count(), 52, "document steps apply");

    let out = run(&[
        "simulate",
        "--config",
        config.to_str().unwrap(),
        "--steps",
        "10",
    ]);
    assert_eq!(stdout(&out).lines().count(), 12, "flag overrides document");
}

#[test]
fn numerical_failure_exits_with_code_two() {
    // Continuous-rate parameters (d > 1) drive the discrete step negative.
    let dir = Workdir::new("numfail");
    let config = dir.file(
        "m.json",
        r#"{"k":1,"b":[3.5],"d":[3.0],"kernel":{"type":"logistic","K":1},"continuous":true}"#,
    );
    let out = run(&[
        "simulate",
        "--config",
        config.to_str().unwrap(),
        "--x0",
        "0.9",
        "--steps",
        "10",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn rejects_unknown_config_fields() {
    let dir = Workdir::new("unknown");
    let config = dir.file(
        "m.json",
        r#"{"k":2,"b":[4,1],"d":[1,0.3],"kernel":{"type":"logistic","K":1},"stepz":50}"#,
    );
    let out = run(&["exclusion", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("stepz"));
}

fn nest_site_config(path: &Path) -> PathBuf {
    let content = r#"{"k":2,"b":[2,1.5],"d":[0.5,0.6],"kernel":{"type":"nest_site","K":1}}"#;
    std::fs::write(path, content).expect("write config");
    path.to_path_buf()
}

#[test]
fn nest_site_models_flow_through_reports() {
    let dir = Workdir::new("nestsite");
    let config = nest_site_config(&dir.path("m.json"));
    let out = run(&["equilibria", "--config", config.to_str().unwrap()]);
    assert!(out.status.success());
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let points = parsed["fixed_points"].as_array().unwrap();
    assert_eq!(points.len(), 3);
    // Axis point of the nest-site kernel solves (K - y)/(b y) = d/b.
    let y = points[1]["point"][0].as_f64().unwrap();
    assert!((y - 1.0 / 1.5).abs() < 1e-10);

    // The closed-form orbit pipeline refuses the non-profile kernel.
    let out = run(&["periodic", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}
