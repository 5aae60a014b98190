use serde_json::Value;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use tempfile::TempDir;

use nlshock::minkowski::{natural_to_si, si_to_natural, FieldTensor3P, UnitSystem};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_nlshock"))
}

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// Compares against `tests/golden/<name>`; `UPDATE_GOLDEN=1` rewrites the file instead.
fn assert_golden(name: &str, actual: &str) {
    let path = golden_dir().join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        fs::create_dir_all(golden_dir()).unwrap();
        fs::write(&path, actual).unwrap();
        return;
    }
    let expected = fs::read_to_string(&path).unwrap_or_else(|e| panic!("missing golden file {}: {e}", path.display()));
    assert_eq!(actual, expected, "output differs from {}", path.display());
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, body).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scenario(model: &str, e: [f64; 3], b: [f64; 3], direction: [f64; 3], extra: &str) -> String {
    format!(
        r#"{{"model": {{"name": "{model}"}}, "background": {{"E": {e:?}, "B": {b:?}}}, "direction": {direction:?}{extra}}}"#
    )
}

fn analyze_json(dir: &TempDir, body: &str) -> (Output, Value) {
    let cfg = write(dir, "scenario.json", body);
    let out = run(&["analyze", "--config", cfg.to_str().unwrap(), "--format", "json"]);
    let v = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out, v)
}

#[test]
fn models_listing_is_stable() {
    let out = run(&["models"]);
    assert!(out.status.success());
    let text = stdout(&out);
    for name in ["maxwell", "born", "born_infeld", "plebanski_custom"] {
        assert!(text.contains(name));
    }
    assert_eq!(text, stdout(&run(&["models"])));
    assert_golden("models.txt", &text);
}

#[test]
fn maxwell_vacuum_report() {
    let dir = TempDir::new().unwrap();
    let (out, v) = analyze_json(&dir, &scenario("maxwell", [0.0; 3], [0.0; 3], [0.0, 0.6, 0.8], ""));
    assert!(out.status.success());
    assert_eq!(v["schema_version"], 1);
    for b in v["branches"].as_array().unwrap() {
        assert!((b["s"].as_f64().unwrap() - 1.0).abs() < 1e-10);
        assert_eq!(b["kappa_free"], true);
        assert_eq!(b["lambda"].as_f64().unwrap(), 0.0);
    }
    assert_eq!(v["birefringent"], false);
}

#[test]
fn born_report_golden() {
    let config = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios/born_crossed.json");
    let out = run(&["analyze", "--config", config.to_str().unwrap(), "--format", "json"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let v: Value = serde_json::from_str(&text).unwrap();
    let plus = &v["branches"][0];
    let minus = &v["branches"][1];
    assert!((plus["s"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert_eq!(minus["rank_n"], 2);
    assert_eq!(v["birefringent"], true);
    assert_golden("analyze_born_crossed.json", &text);

    let human = stdout(&run(&["analyze", "--config", config.to_str().unwrap()]));
    assert!(human.contains("birefringent: yes"));
    assert!(human.contains("optical metric (minus branch)"));
}

#[test]
fn missing_direction_is_a_config_error() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "bad.json", r#"{"model": {"name": "born"}, "background": {"E": [0,0,0], "B": [0,0,0]}}"#);
    let out = run(&["analyze", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("direction"), "{err}");
}

#[test]
fn solver_failure_exits_3_and_reports_branches() {
    let dir = TempDir::new().unwrap();
    let body = scenario("maxwell", [0.0; 3], [0.0; 3], [1.0, 0.0, 0.0], r#", "solver": {"s_range": [1.5, 3.0]}"#);
    let (out, v) = analyze_json(&dir, &body);
    assert_eq!(out.status.code(), Some(3));
    assert!(v["branches"][0]["error"].as_str().unwrap().contains("no root"));
    assert!(v["branches"][1]["error"].as_str().unwrap().contains("no root"));

    // Outside the Born domain the background itself is rejected.
    let cfg = write(&dir, "domain.json", &scenario("born", [0.0, 0.0, 1.5], [0.0; 3], [1.0, 0.0, 0.0], ""));
    assert_eq!(run(&["analyze", "--config", cfg.to_str().unwrap()]).status.code(), Some(3));
}

#[test]
fn verify_outcomes() {
    let dir = TempDir::new().unwrap();
    let born = write(&dir, "born.json", &scenario("born", [0.0, 0.0, 0.3], [0.0, 0.2, 0.1], [1.0, 0.0, 0.0], ""));
    let out = run(&["verify", "--config", born.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stdout(&out));
    assert!(!stdout(&out).contains("FAIL"));

    let abused = write(
        &dir,
        "abused.json",
        &scenario("born", [0.0, 0.0, 0.3], [0.0, 0.2, 0.1], [1.0, 0.0, 0.0], r#", "solver": {"rank_tol": 1e-30}"#),
    );
    let out = run(&["verify", "--config", abused.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).lines().any(|l| l.starts_with("FAIL") && l.contains("rank")));

    let bi = write(&dir, "bi.json", &scenario("born_infeld", [0.1, -0.3, 0.25], [0.2, 0.15, -0.1], [0.3, -0.5, 0.8], ""));
    let out = run(&["verify", "--config", bi.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stdout(&out));
    let line = stdout(&out).lines().find(|l| l.contains("Born identities")).unwrap().to_string();
    assert!(line.starts_with("N/A"), "{line}");
}

fn sweep(dir: &TempDir, config: &str, spec: &str) -> (Output, String) {
    let cfg = write(dir, "sweep_config.json", config);
    let spec = write(dir, "sweep_spec.json", spec);
    let out_path = dir.path().join("out.csv");
    let out = run(&["sweep", "--config", cfg.to_str().unwrap(), "--spec", spec.to_str().unwrap(), "--out", out_path.to_str().unwrap()]);
    let csv = fs::read_to_string(&out_path).unwrap_or_default();
    (out, csv)
}

fn column(csv: &str, name: &str) -> Vec<f64> {
    let mut lines = csv.lines().filter(|l| !l.starts_with('#'));
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let idx = header.iter().position(|h| *h == name).unwrap();
    lines.map(|l| l.split(',').nth(idx).unwrap().parse().unwrap()).collect()
}

const BZ_SWEEP: &str = r#"{"parameter": "background.B[2]", "start": 0.0, "stop": 0.5, "steps": 11,
    "quantities": ["s_plus", "s_minus", "kappa_minus", "rank_minus", "birefringence_gap"]}"#;

#[test]
fn born_sweep_gap_grows_from_zero() {
    let dir = TempDir::new().unwrap();
    let config = scenario("born", [0.0; 3], [0.0; 3], [1.0, 0.0, 0.0], "");
    let (out, csv) = sweep(&dir, &config, BZ_SWEEP);
    assert!(out.status.success());
    let gap = column(&csv, "birefringence_gap");
    assert_eq!(gap[0], 0.0);
    assert!(gap.windows(2).all(|w| w[1] > w[0]));
    // Pure transverse magnetic field: s₋² = 1 + B².
    let s = column(&csv, "s_minus");
    for (i, s) in s.iter().enumerate().skip(1) {
        let b = 0.05 * i as f64;
        assert!((s - (1.0 + b * b).sqrt()).abs() < 1e-9);
    }
    assert_golden("sweep_born_magnetic.csv", &csv);
}

#[test]
fn born_infeld_sweep_has_no_gap() {
    let dir = TempDir::new().unwrap();
    let config = scenario("born_infeld", [0.1, -0.2, 0.0], [0.0, 0.1, 0.0], [0.3, -0.5, 0.8], "");
    let (out, csv) = sweep(&dir, &config, BZ_SWEEP);
    assert!(out.status.success());
    assert!(column(&csv, "birefringence_gap").iter().all(|g| *g <= 1e-9));
}

#[test]
fn two_steps_two_rows_and_determinism() {
    let dir = TempDir::new().unwrap();
    let config = scenario("born", [0.0, 0.0, 0.3], [0.0, 0.2, 0.1], [1.0, 0.0, 0.0], "");
    let spec = r#"{"parameter": "direction.azimuth", "start": 0.0, "stop": 1.0, "steps": 2}"#;
    let (out, first) = sweep(&dir, &config, spec);
    assert!(out.status.success());
    let data: Vec<&str> = first.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(data.len(), 3);
    let (_, second) = sweep(&dir, &config, spec);
    assert_eq!(first, second);

    let (o1, _) = analyze_json(&dir, &config);
    let (o2, _) = analyze_json(&dir, &config);
    assert_eq!(o1.stdout, o2.stdout);
}

#[test]
fn bad_sweep_spec_exits_2() {
    let dir = TempDir::new().unwrap();
    let config = scenario("born", [0.0; 3], [0.0; 3], [1.0, 0.0, 0.0], "");
    let (out, _) = sweep(&dir, &config, r#"{"parameter": "model.b", "start": 1, "stop": 2, "steps": 1}"#);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn si_and_natural_reports_agree() {
    let units = UnitSystem::codata(2.0e9);
    let natural = FieldTensor3P::new([0.0, 0.05, 0.3], [0.1, 0.2, 0.1]);
    let si = natural_to_si(&natural, &units).unwrap();
    let converted = si_to_natural(&si, &units).unwrap();
    let e: [f64; 3] = si.e.into();
    let b: [f64; 3] = si.b.into();
    let si_body = format!(
        r#"{{"model": {{"name": "born", "b": 2.0e9}}, "background": {{"units": "si", "E": {e:?}, "B": {b:?}}},
            "units": {{"c": {}, "mu0": {}}}, "direction": [1.0, 0.0, 0.0]}}"#,
        units.c, units.mu0
    );
    let nat_body = scenario(
        "born",
        converted.e.into(),
        converted.b.into(),
        [1.0, 0.0, 0.0],
        r#", "model": {"name": "born", "b": 2.0e9}"#,
    )
    .replacen(r#""model": {"name": "born"}, "#, "", 1);
    let dir = TempDir::new().unwrap();
    let (a, _) = analyze_json(&dir, &si_body);
    let (b_out, _) = analyze_json(&dir, &nat_body);
    assert!(a.status.success() && b_out.status.success());
    assert_eq!(stdout(&a), stdout(&b_out));
}
