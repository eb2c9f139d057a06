use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn skeptic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_skeptic")).args(args).output().unwrap()
}

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name).display().to_string()
}

fn json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn decide_reports_maximal_set_and_outer_vector() {
    let v = json(&skeptic(&["decide", &fixture("outer_gap.json")]));
    assert_eq!(v["outer_partial_vector"], "**");
    assert_eq!(v["checks"], 8);
    assert_eq!(v["distance"], 1);
}

#[test]
fn br_rules_on_interval_dominance_model() {
    let v = json(&skeptic(&["br", &fixture("interval_dominance.json")]));
    assert_eq!(v["skeptic"], "1*");
    assert!(v["interval_dominance"].as_array().unwrap().len() >= 2);
}

#[test]
fn examples_subcommand_passes() {
    let out = skeptic(&["examples"]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(out.status.success(), "{text}");
    assert!(text.lines().all(|l| l.starts_with("PASS")));
}

#[test]
fn simulate_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let v = json(&skeptic(&["simulate", "--m", "2,3", "--epsilon", "0.25", "--trees", "20", "--reps", "2", "--out", out]));
    assert_eq!(v.as_array().unwrap().len(), 2);
    for file in ["simulation.csv", "simulation_summary.csv", "simulation_summary.json"] {
        assert!(dir.path().join(file).exists(), "{file}");
    }
}

#[test]
fn timing_runs_on_small_grid() {
    let v = json(&skeptic(&["timing", "--m", "2,3", "--instances", "2", "--serial"]));
    assert_eq!(v["rows"][1]["subset_checks"], 26);
}

fn dataset_run(dir: &Path, extra: &[&str]) -> PathBuf {
    let data = fixture("synthetic.csv");
    let out = dir.to_str().unwrap();
    let mut args = vec!["dataset", "--data", &data, "--out", out, "--bins", "3", "--s", "0,2", "--gamma", "0", "--c-sep", "0.3", "--c-par", "0.5"];
    args.extend_from_slice(extra);
    json(&skeptic(&args));
    dir.join("metrics.csv")
}

#[test]
fn dataset_cv_is_deterministic_across_thread_modes() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let flags = ["--levels", "0,50", "--shuffles", "1", "--folds", "5", "--corruption", "flipping", "--beta", "0.3"];
    let first = std::fs::read_to_string(dataset_run(a.path(), &flags)).unwrap();
    let mut serial = flags.to_vec();
    serial.push("--serial");
    let second = std::fs::read_to_string(dataset_run(b.path(), &serial)).unwrap();
    assert_eq!(first, second);
    assert!(first.starts_with("dataset,method,hyperparameter,level,trial,IC,CP\n"));
}

#[test]
fn dataset_downsampling_runs() {
    let dir = tempfile::tempdir().unwrap();
    let csv = std::fs::read_to_string(dataset_run(dir.path(), &["--protocol", "downsampling", "--levels", "30,70", "--repeats", "2"])).unwrap();
    assert!(csv.lines().count() > 1);
}

#[test]
fn errors_exit_with_code_2() {
    let out = skeptic(&["decide", "/nonexistent/tree.json"]);
    assert_eq!(out.status.code(), Some(2));
    let out = skeptic(&["dataset", "--data", &fixture("synthetic.csv"), "--protocol", "downsampling", "--levels", "15"]);
    assert_eq!(out.status.code(), Some(2));
}
