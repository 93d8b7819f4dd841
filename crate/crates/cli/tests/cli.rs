use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn fqlab(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fqlab")).current_dir(dir).args(args).output().unwrap()
}

fn manifest(dir: &Path, name: &str) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join(format!("{name}.manifest.json"))).unwrap()).unwrap()
}

#[test]
fn cost_table_has_one_row_per_alpha() {
    let dir = tempfile::tempdir().unwrap();
    let out = fqlab(dir.path(), &["cost", "--alpha-range", "1:8:0.25", "--out", "regimes.csv"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(dir.path().join("regimes.csv")).unwrap();
    assert_eq!(text.lines().count(), 30);
    assert!(dir.path().join("regimes.csv.manifest.json").exists());
}

#[test]
fn unknown_subcommand_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(fqlab(dir.path(), &["frobnicate"]).status.code(), Some(2));
    assert_eq!(fqlab(dir.path(), &[]).status.code(), Some(2));
    assert_eq!(fqlab(dir.path(), &["evolve", "--order", "3"]).status.code(), Some(2));
}

#[test]
fn flags_override_config_which_overrides_defaults() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("cfg.json"), r#"{"evolve": {"steps": 7, "time": 0.25, "points": 4}}"#).unwrap();
    let out = fqlab(dir.path(), &["--config", "cfg.json", "evolve", "--steps", "3", "--out", "psi.fqs"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let params = &manifest(dir.path(), "psi.fqs")["params"];
    assert_eq!(params["steps"], 3);
    assert_eq!(params["time"], 0.25);
    assert_eq!(params["order"], 2);
    assert_eq!(params["points"], 4);
}

#[test]
fn singular_potential_exits_with_numerical_code() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("nuc.txt"), "1 0.0\n").unwrap();
    let out = fqlab(
        dir.path(),
        &["evolve", "--points", "4", "--eta", "1", "--nuclei", "nuc.txt", "--steps", "2", "--out", "psi.fqs"],
    );
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn same_seed_gives_identical_outputs() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["a", "b"] {
        let out = fqlab(dir.path(), &["evolve", "--points", "4", "--seed", "5", "--out", &format!("{name}.fqs")]);
        assert!(out.status.success());
        let out = fqlab(
            dir.path(),
            &[
                "shadows",
                "--in",
                &format!("{name}.fqs"),
                "--samples",
                "3000",
                "--seed",
                "9",
                "--out",
                &format!("{name}.csv"),
            ],
        );
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    for ext in ["fqs", "csv"] {
        let a = fs::read(dir.path().join(format!("a.{ext}"))).unwrap();
        let b = fs::read(dir.path().join(format!("b.{ext}"))).unwrap();
        assert_eq!(a, b, "{ext} differs");
    }
    let digest = |name: &str| manifest(dir.path(), name)["outputs"].as_object().unwrap().values().next().cloned();
    assert_eq!(digest("a.csv"), digest("b.csv"));
}

#[test]
fn zero_time_experiment_recovers_occupied_orbital() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("elements.txt"), "0;0\n2;2\n0;1\n").unwrap();
    let out = fqlab(
        dir.path(),
        &["experiment", "--epsilon", "0.3", "--samples", "20000", "--elements", "elements.txt", "--out", "est.csv"],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("est.report.json")).unwrap()).unwrap();
    let rho00 = &report["elements"][0];
    assert!((rho00["exact"][0].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!((rho00["estimate"][0].as_f64().unwrap() - 1.0).abs() < 0.3);
    assert_eq!(report["within_epsilon"], true);
}
