use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn scene(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("scenes")
        .join(format!("{name}.json"))
}

fn diffcoh(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_diffcoh"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn run_scene(cmd: &str, name: &str, extra: &[&str]) -> (i32, Value, tempfile::TempDir) {
    let dir = tempfile::tempdir().unwrap();
    let s = scene(name);
    let mut args = vec![cmd, "--scene", s.to_str().unwrap()];
    args.extend_from_slice(extra);
    let out = diffcoh(&args, dir.path());
    let code = out.status.code().unwrap();
    let report = std::fs::read_to_string(dir.path().join("report.json"))
        .map(|t| serde_json::from_str(&t).unwrap())
        .unwrap_or(Value::Null);
    (code, report, dir)
}

#[test]
fn delta_matches_closed_form() {
    let (code, delta, _d1) = run_scene("delta", "sl2z", &[]);
    assert_eq!(code, 0);
    let (code, cmp, _d2) = run_scene("borel-compare", "sl2z", &[]);
    assert_eq!(code, 0);
    let closed = cmp["details"]["closed_form"].as_f64().unwrap();
    let value = delta["value"].as_f64().unwrap();
    assert!((value - closed).abs() <= 1e-10, "{value} vs {closed}");
    assert!(delta["error_estimate"].as_f64().unwrap() <= 1e-10);
}

#[test]
fn flat_identity_vanishes() {
    let (code, r, _d) = run_scene("identity54", "identity-flat", &[]);
    assert_eq!(code, 0);
    let fine = &r["details"]["fine"];
    assert!(fine["residual"].as_f64().unwrap() <= 1e-10, "{fine}");
}

#[test]
fn zero_chain_is_inconclusive() {
    let (code, r, _d) = run_scene("certify", "certify-zero", &[]);
    assert_eq!(code, 4);
    assert_eq!(r["details"]["certificate"]["verdict"], "inconclusive");
}

#[test]
fn non_cycle_chain_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scene.json");
    let mut s: Value =
        serde_json::from_str(&std::fs::read_to_string(scene("certify-zero")).unwrap()).unwrap();
    s["chain"] = serde_json::json!({"terms": [{"a": 1.0, "h": "f", "k": "g"}]});
    std::fs::write(&path, s.to_string()).unwrap();
    let out = diffcoh(&["certify", "--scene", path.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not a cycle"));
}

#[test]
fn unknown_key_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scene.json");
    std::fs::write(&path, "{\n  \"dim\": 2,\n  \"wrods\": {}\n}\n").unwrap();
    let out = diffcoh(&["delta", "--scene", path.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 3") && err.contains("wrods"), "{err}");
    assert!(!dir.path().join("report.json").exists());
}

#[test]
fn missing_scene_is_a_domain_error() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(diffcoh(&["delta"], dir.path()).status.code(), Some(2));
}

#[test]
fn bad_grid_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let s = scene("sl2z");
    let out = diffcoh(
        &["delta", "--scene", s.to_str().unwrap(), "--grid", "12,24"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn report_echoes_inputs() {
    let (code, r, dir) = run_scene("rotation", "rotation", &["--grid", "16,32", "--seed", "9"]);
    assert_eq!(code, 0);
    assert_eq!(r["schema"], 1);
    assert_eq!(r["subcommand"], "rotation");
    assert_eq!(r["inputs"]["grid"]["coarse"], 16);
    assert_eq!(r["seed"], 9);
    assert_eq!(r["inputs"]["scene"]["name"], "rotation");
    assert!(r["wall_time"].as_f64().unwrap() >= 0.0);
    let csv = std::fs::read_to_string(dir.path().join("convergence.csv")).unwrap();
    assert_eq!(csv.lines().count(), 3);
}

#[test]
fn json_only_prints_report() {
    let (code, _r, dir) = run_scene("helicity", "helicity", &["--json-only"]);
    assert_eq!(code, 0);
    assert!(!dir.path().join("convergence.csv").exists());
    let s = scene("helicity");
    let out = diffcoh(
        &["helicity", "--scene", s.to_str().unwrap(), "--json-only"],
        dir.path(),
    );
    let printed: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(
        (printed["value"].as_f64().unwrap() - 1.0 / (2.0 * std::f64::consts::PI)).abs() < 1e-10
    );
}

fn without_wall_time(dir: &Path) -> String {
    let text = std::fs::read_to_string(dir.join("report.json")).unwrap();
    text.lines()
        .filter(|l| !l.trim_start().starts_with("\"wall_time\""))
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn reports_are_deterministic_across_thread_counts() {
    for (cmd, name) in [
        ("lemma65", "lemma65"),
        ("pairing", "pairing"),
        ("lie-phi", "lie-phi"),
    ] {
        let (c1, _, d1) = run_scene(cmd, name, &["--threads", "1"]);
        let (c4, _, d4) = run_scene(cmd, name, &["--threads", "4"]);
        assert_eq!((c1, c4), (0, 0));
        assert_eq!(
            without_wall_time(d1.path()),
            without_wall_time(d4.path()),
            "{cmd}"
        );
    }
}

#[test]
fn seed_changes_random_fields() {
    let (_, a, _d1) = run_scene("cartan", "cartan", &["--seed", "1"]);
    let (_, b, _d2) = run_scene("cartan", "cartan", &["--seed", "2"]);
    assert_ne!(a["value"], b["value"]);
}

#[test]
fn selftest_runs_without_a_scene() {
    let dir = tempfile::tempdir().unwrap();
    let out = diffcoh(&["selftest", "--grid", "8,16"], dir.path());
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
}
