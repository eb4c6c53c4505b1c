use std::path::Path;
use std::process::{Command, Output};

fn grandnet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_grandnet")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn grand_net_norm_of_constant() {
    let out = grandnet(&["norm", "--space", "gn", "--theta", "1", "--p", "1", "--q", "1", "--net", "full", "--values", "1"]);
    assert!(out.status.success());
    let v = json(&out)["result"]["value"].as_f64().unwrap();
    assert!((v - 0.5).abs() < 1e-6, "{v}");
}

#[test]
fn infinite_norms_are_reported() {
    // θ < 1/q with p = inf diverges as ε -> 0
    let out = grandnet(&["norm", "--space", "gl-star", "--theta", "0.5", "--p", "inf", "--q", "1", "--values", "1"]);
    assert!(out.status.success());
    let r = &json(&out)["result"];
    assert_eq!(r["infinite"], true);
    assert!(r["value"].is_null());
}

#[test]
fn verify_holder_suite_passes() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let out = grandnet(&["verify", "--suite", "S6", "--seed", "1", "--count", "50", "--out", report.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(r["passed"], true);
    assert_eq!(r["suites"][0]["suite"], "S6");
    assert_eq!(r["suites"][0]["abs_tol"], 1e-9);
    assert_eq!(r["suites"][0]["weight_variant"], "uniform");
}

#[test]
fn verify_reports_are_byte_identical() {
    let a = grandnet(&["verify", "--suite", "S3", "--count", "6"]);
    let b = grandnet(&["verify", "--suite", "S3", "--count", "6"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn failing_suite_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    // a negative additive tolerance makes every equality case fail
    let cfg = write(dir.path(), "cfg.json", r#"{"settings": {"abs_tol": -1.0}}"#);
    let out = grandnet(&["verify", "--suite", "S3", "--count", "3", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["passed"], false);
}

#[test]
fn certify_constant_kernel() {
    let dir = tempfile::tempdir().unwrap();
    let k = write(dir.path(), "k.json", r#"{"nx": 4, "ny": 4, "values": [[1,1,1,1],[1,1,1,1],[1,1,1,1],[1,1,1,1]]}"#);
    let out = grandnet(&["certify", "--kernel", &k, "--q", "2", "--theta", "0", "--associate", "lp-dual", "--p-prime", "2"]);
    assert!(out.status.success());
    let c = json(&out);
    for key in ["criterion", "empirical_lower_bound", "ratio"] {
        assert!((c[key].as_f64().unwrap() - 1.0).abs() < 1e-6, "{key}: {}", c[key]);
    }
    assert_eq!(c["weight_variant"], "uniform");
}

#[test]
fn malformed_kernel_names_the_location() {
    let dir = tempfile::tempdir().unwrap();
    let k = write(dir.path(), "k.json", "{\"nx\": 2,\n \"ny\": 2,\n \"values\": [[1, 2], [3]]}");
    let out = grandnet(&["certify", "--kernel", &k, "--q", "2"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("k.json") && err.contains("row 1"), "{err}");

    let k = write(dir.path(), "broken.json", "{\"nx\": 2,\n \"ny\": 2,\n \"values\": [[1, 2] [3, 4]]}");
    let out = grandnet(&["certify", "--kernel", &k, "--q", "2"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("broken.json") && err.contains("line 3"), "{err}");
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "cfg.json",
        r#"{"command": "norm", "function": {"values": "1"}, "space": "gn", "theta": 1, "p": 1, "q": "inf", "net": "full"}"#,
    );
    let out = grandnet(&["norm", "--config", &cfg, "--q", "1"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let r = json(&out);
    assert_eq!(r["params"]["q"], 1.0);
    assert!((r["result"]["value"].as_f64().unwrap() - 0.5).abs() < 1e-6);
}

#[test]
fn unknown_config_key_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "cfg.json", r#"{"thetta": 1}"#);
    let out = grandnet(&["norm", "--config", &cfg, "--p", "1", "--q", "1", "--values", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("thetta"));
}

#[test]
fn bad_flags_exit_with_one() {
    assert_eq!(grandnet(&["norm", "--nope"]).status.code(), Some(1));
    assert_eq!(grandnet(&["norm", "--p", "1", "--values", "1"]).status.code(), Some(1));
    assert_eq!(grandnet(&["verify", "--suite", "S99"]).status.code(), Some(1));
}

#[test]
fn csv_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("avg.csv");
    let out = grandnet(&["avg", "--values", "1,1,-1,-1", "--subdivisions", "1", "--out", out_path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&out_path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t_lo,t_hi,value"));
    assert_eq!(lines.next(), Some("0.0,0.5,1.0"));
    assert!(!text.contains('\r'));

    let out = grandnet(&["rearrange", "--values", "4,0,0,0"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().nth(1), Some("0.25,4.0,4.0"));
    assert_eq!(text.lines().nth(2), Some("0.5,0.0,2.0"));

    let input = write(dir.path(), "f.csv", "1\n2\n# comment\n3,4\n");
    let out = grandnet(&[
        "kfunc", "--input", &input, "--theta0", "1", "--p0", "1", "--q0", "2", "--theta1", "1", "--p1", "2", "--q1", "2",
        "--t-points", "3",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 4);
    assert!(text.starts_with("t,k_upper\n1e-6,"));
}

#[test]
fn interp_check_report() {
    let out = grandnet(&[
        "interp-check", "--values", "1,2,3,4", "--theta", "1", "--eta", "0.5", "--q", "2", "--p0", "1", "--q0", "2", "--p1",
        "2", "--q1", "2",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let r = json(&out);
    let ratio = r["report"]["ratio"].as_f64().unwrap();
    assert!(ratio.is_finite() && ratio > 0.0);
    assert!((r["params"]["p"].as_f64().unwrap() - 4.0 / 3.0).abs() < 1e-12);
}
