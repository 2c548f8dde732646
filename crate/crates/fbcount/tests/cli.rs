use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn fbcount(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fbcount"))
        .args(args)
        .env_remove("FBCOUNT_THREADS")
        .output()
        .expect("binary runs")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn analyze_json(spec: &str, dir: &Path) -> (i32, Value) {
    let json = dir.join("report.json");
    let out = fbcount(&["analyze", path_str(&fixture(spec)), "--json", path_str(&json)]);
    let text = std::fs::read_to_string(&json).expect("report written");
    (out.status.code().unwrap(), serde_json::from_str(&text).unwrap())
}

fn write_spec(dir: &Path, text: &str) -> PathBuf {
    let p = dir.join("spec.json");
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn fig7_left_reports_four_normal_tangent_pairs() {
    let dir = tempfile::tempdir().unwrap();
    let (code, report) = analyze_json("fig7_left.json", dir.path());
    assert_eq!(code, 0);
    assert_eq!(report["status"], "ok");
    assert_eq!(report["counts"]["n1"], 4);
    assert_eq!(report["counts"]["n2"], 0);
    assert_eq!(report["residuals"]["theorem1"], "0");
    assert!(report["trace"]["mp"]["errors"].as_array().unwrap().is_empty());
}

#[test]
fn render_reproduces_the_analyze_drawing() {
    let dir = tempfile::tempdir().unwrap();
    let (json, svg, again) = (dir.path().join("r.json"), dir.path().join("a.svg"), dir.path().join("b.svg"));
    let spec = fixture("figure_eight.json");
    let out = fbcount(&["analyze", path_str(&spec), "--json", path_str(&json), "--svg", path_str(&svg)]);
    assert_eq!(out.status.code(), Some(0));
    let out = fbcount(&["render", path_str(&json), "--svg", path_str(&again)]);
    assert_eq!(out.status.code(), Some(0));
    let a = std::fs::read(&svg).unwrap();
    assert!(a.starts_with(b"<svg"));
    assert_eq!(a, std::fs::read(&again).unwrap());
}

#[test]
fn circle_has_no_events() {
    let dir = tempfile::tempdir().unwrap();
    let (code, report) = analyze_json("circle.json", dir.path());
    assert_eq!(code, 0);
    assert!(report["events"].as_array().unwrap().is_empty());
}

#[test]
fn right_angle_is_not_generic() {
    let dir = tempfile::tempdir().unwrap();
    let (code, report) = analyze_json("right_angle.json", dir.path());
    assert_eq!(code, 3);
    assert_eq!(report["status"], "non_generic");
    let codes: Vec<&str> =
        report["violations"].as_array().unwrap().iter().map(|v| v["code"].as_str().unwrap()).collect();
    assert!(codes.contains(&"perpendicular_tangents"), "{codes:?}");

    let out = fbcount(&["check", path_str(&fixture("right_angle.json"))]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn malformed_specs_name_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        (r#"{"kind": "spherical", "builtin": {"name": "bean", "params": {"a": "x"}}}"#, "builtin.params.a"),
        (r#"{"kind": "spherical", "samples": [[1, 0, 0], [0, 1]]}"#, "samples[1]"),
        (r#"{"kind": "spherical", "builtin": {"name": "fig7_left"}, "config": {"grid": -3}}"#, "config.grid"),
        (r#"{"kind": "hyperbolic", "samples": []}"#, "kind"),
    ];
    for (text, field) in cases {
        let spec = write_spec(dir.path(), text);
        let out = fbcount(&["analyze", path_str(&spec)]);
        assert_eq!(out.status.code(), Some(1), "{text}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains(field), "{text}: {err}");
    }
    let out = fbcount(&["analyze", path_str(&dir.path().join("missing.json"))]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn dual_of_the_figure_eight_is_a_valid_spec() {
    let dir = tempfile::tempdir().unwrap();
    let dual = dir.path().join("dual.json");
    let out = fbcount(&["dual", path_str(&fixture("figure_eight.json")), "--out", path_str(&dual)]);
    assert_eq!(out.status.code(), Some(0));
    let spec: Value = serde_json::from_str(&std::fs::read_to_string(&dual).unwrap()).unwrap();
    assert_eq!(spec["samples"].as_array().unwrap().len(), 2048);

    let json = dir.path().join("r.json");
    let out = fbcount(&["analyze", path_str(&dual), "--json", path_str(&json), "--no-trace"]);
    assert_eq!(out.status.code(), Some(0));
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    // the figure eight has two inflections, which become cusps
    assert_eq!(report["counts"]["u"], 2);
    assert!(report.get("trace").is_none());
}

#[test]
fn trace_writes_csv() {
    for kind in ["mp", "vp"] {
        let out = fbcount(&["trace", path_str(&fixture("fig7_left.json")), "--kind", kind]);
        assert_eq!(out.status.code(), Some(0));
        let text = String::from_utf8(out.stdout).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("row,t,value,delta,causes"));
        assert!(lines.any(|l| l.starts_with("jump,")));
    }
}

#[test]
fn oracle_agrees_with_the_pipeline() {
    let spec = fixture("fig7_left.json");
    let out = fbcount(&["oracle", path_str(&spec), "--resolution", "20000", "--compare"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));

    let out = fbcount(&["oracle", path_str(&spec), "--resolution", "100"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn thread_count_is_validated() {
    let spec = fixture("circle.json");
    let out = fbcount(&["--threads", "0", "check", path_str(&spec)]);
    assert_eq!(out.status.code(), Some(1));

    let out = Command::new(env!("CARGO_BIN_EXE_fbcount"))
        .args(["check", path_str(&spec)])
        .env("FBCOUNT_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn help_lists_exit_codes_and_defaults() {
    let out = fbcount(&["--help"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("3 not generic"));
    assert!(text.contains("grid = 1024"));
    assert!(text.contains("oracle_resolution = 100000"));
}
