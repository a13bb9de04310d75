use std::path::Path;
use std::process::Command;

use revolv::formats::{parse_sections_csv, write_sections_csv, BodyDoc};

fn revolv(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_revolv"))
        .args(args)
        .env("REVOLV_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    revolv(args).status.code().expect("exit code")
}

#[test]
fn ball_sections_are_constant() {
    let out = revolv(&["sections", "--d", "4", "--n", "10", "--cluster-threshold", "0"]);
    assert!(out.status.success());
    let rows = parse_sections_csv(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert_eq!(rows.len(), 11);
    assert!(rows.last().unwrap().slope.is_none());
    let v = 4.0 * std::f64::consts::PI / 3.0;
    for r in &rows {
        for x in [r.central, r.maximal, r.projection] {
            assert!((x - v).abs() <= 1e-9 * v, "{r:?}");
        }
    }
}

#[test]
fn klee_sections_have_constant_maximal_column() {
    let out = revolv(&["sections", "--body", "klee", "--n", "30"]);
    assert!(out.status.success());
    let rows = parse_sections_csv(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    let v = 4.0 * std::f64::consts::PI / 3.0;
    assert!(rows.iter().all(|r| (r.maximal - v).abs() <= 1e-9 * v));
    let (lo, hi) = rows.iter().fold((f64::MAX, f64::MIN), |(lo, hi), r| {
        (lo.min(r.central), hi.max(r.central))
    });
    assert!(hi - lo > 1e-7, "A column is constant");
}

#[test]
fn output_is_deterministic_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for path in [&a, &b] {
        let p = path.to_str().unwrap();
        assert_eq!(
            code(&[
                "sections",
                "--body",
                "bonnesen-plus",
                "--d",
                "6",
                "--n",
                "20",
                "--out",
                p
            ]),
            0
        );
    }
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    assert_eq!(write_sections_csv(&parse_sections_csv(&text).unwrap()), text);
}

#[test]
fn config_errors_exit_with_two() {
    assert_eq!(code(&["sections", "--body", "/definitely/not/here.json"]), 2);
    assert_eq!(code(&["verify", "--mode", "bonnesen", "--d", "5"]), 2);
    assert_eq!(code(&["sections", "--d", "2"]), 2);
    assert_eq!(code(&["sections", "--n", "1"]), 2);
    assert_eq!(code(&["klee", "--d", "5"]), 2);
    assert_eq!(code(&["sections", "--bogus"]), 2);
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    std::fs::write(&cfg, "{ not json").unwrap();
    assert_eq!(code(&["sections", "--config", cfg.to_str().unwrap()]), 2);
}

#[test]
fn bad_threads_variable_is_a_config_error() {
    let out = Command::new(env!("CARGO_BIN_EXE_revolv"))
        .args(["sections", "--n", "5", "--cluster-threshold", "0"])
        .env("REVOLV_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn numerical_failure_exits_with_three() {
    // The moment system in dimension 12 is numerically singular.
    assert_eq!(code(&["bonnesen", "--d", "12"]), 3);
    // A start below the epsilon floor is rejected up front.
    assert_eq!(code(&["bonnesen", "--d", "6", "--eps0", "1e-9"]), 2);
}

#[test]
fn config_file_is_used_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"d": 6, "n": 14, "cluster_threshold": 0}"#).unwrap();
    let c = cfg.to_str().unwrap();
    let six = revolv(&["sections", "--config", c]);
    let rows = parse_sections_csv(std::str::from_utf8(&six.stdout).unwrap()).unwrap();
    assert_eq!(rows.len(), 15);
    let v6 = 8.0 * std::f64::consts::PI * std::f64::consts::PI / 15.0;
    assert!((rows[0].central - v6).abs() < 1e-9);
    let four = revolv(&["sections", "--config", c, "--d", "4"]);
    let rows = parse_sections_csv(std::str::from_utf8(&four.stdout).unwrap()).unwrap();
    assert!((rows[0].central - 4.0 * std::f64::consts::PI / 3.0).abs() < 1e-9);
}

#[test]
fn constructed_bodies_persist_and_reload() {
    let dir = tempfile::tempdir().unwrap();
    let body = dir.path().join("klee.json");
    assert_eq!(code(&["klee", "--out", body.to_str().unwrap()]), 0);
    let doc: BodyDoc = serde_json::from_str(&std::fs::read_to_string(&body).unwrap()).unwrap();
    assert_eq!(doc.d, 4);
    assert_eq!(doc.profile.variant, "level_branch");
    let from_file = revolv(&["sections", "--body", body.to_str().unwrap(), "--n", "20"]);
    let by_name = revolv(&["sections", "--body", "klee", "--n", "20"]);
    assert!(from_file.status.success());
    assert_eq!(from_file.stdout, by_name.stdout);

    let pair = dir.path().join("pair.json");
    assert_eq!(code(&["bonnesen", "--d", "6", "--out", pair.to_str().unwrap()]), 0);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&pair).unwrap()).unwrap();
    let plus = dir.path().join("plus.json");
    std::fs::write(&plus, v["plus"].to_string()).unwrap();
    let a = revolv(&["sections", "--body", plus.to_str().unwrap(), "--n", "20"]);
    let b = revolv(&["sections", "--body", "bonnesen-plus", "--d", "6", "--n", "20"]);
    assert_eq!(a.stdout, b.stdout);
}

fn verify_report(mode: &str, d: &str, dir: &Path) -> (i32, serde_json::Value, String) {
    let report = dir.join(format!("{mode}{d}.json"));
    let out = revolv(&["verify", "--mode", mode, "--d", d, "--report", report.to_str().unwrap()]);
    let v = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    (out.status.code().unwrap(), v, String::from_utf8(out.stdout).unwrap())
}

#[test]
fn verify_klee_passes() {
    let dir = tempfile::tempdir().unwrap();
    let (code, v, stdout) = verify_report("klee", "4", dir.path());
    assert_eq!(code, 0, "{stdout}");
    assert_eq!(v["pass"], true);
    assert!(stdout.lines().all(|l| l.starts_with("PASS")));
}

#[test]
fn verify_bonnesen_passes() {
    let dir = tempfile::tempdir().unwrap();
    let (code, v, stdout) = verify_report("bonnesen", "6", dir.path());
    assert_eq!(code, 0, "{stdout}");
    for key in ["A", "M", "P"] {
        assert!(v["max_rel_discrepancy"][key].as_f64().unwrap() <= 1e-6);
    }
    assert_eq!(v["pojmal_pass"], true);
    assert_eq!(v["A1"].as_array().unwrap().len(), v["grid"].as_array().unwrap().len());
    // The report is byte-for-byte reproducible.
    let again = tempfile::tempdir().unwrap();
    let (_, w, _) = verify_report("bonnesen", "6", again.path());
    assert_eq!(v, w);
}
