use atiyah_cli::{run, Report, Scenario, Suite};
use std::path::Path;
use std::process::Command;

const ALL: &str = r#"["fbs-extension","connection-axioms","roundtrips","groupoid-axioms","llgpd-extension","curvature","flatness","semidirect-pipeline"]"#;

fn scenario(bundle: &str, connection: &str, suites: &str) -> String {
    format!(r#"{{"bundle": {bundle}, "connection": {connection}, "suites": {suites}, "samples": 200, "seed": 11}}"#)
}

fn atiyah(dir: &Path, text: &str, extra: &[&str]) -> (i32, Option<Report>) {
    let input = dir.join("scenario.json");
    let out = dir.join("report.json");
    let _ = std::fs::remove_file(&out);
    std::fs::write(&input, text).unwrap();
    let status = Command::new(env!("CARGO_BIN_EXE_atiyah"))
        .arg("run")
        .arg(&input)
        .arg("--out")
        .arg(&out)
        .args(extra)
        .output()
        .unwrap()
        .status;
    let report = std::fs::read_to_string(&out).ok().map(|t| serde_json::from_str(&t).unwrap());
    (status.code().unwrap(), report)
}

#[test]
fn flat_scenario_passes() {
    let dir = tempfile::tempdir().unwrap();
    let (code, report) = atiyah(dir.path(), &scenario(r#"{"kind": "trivial", "base": "torus", "group": "su2"}"#, r#"{"kind": "flat"}"#, ALL), &[]);
    assert_eq!(code, 0);
    let report = report.unwrap();
    assert!(report.pass);
    assert_eq!(report.suites.len(), 8);
}

#[test]
fn hopf_flatness_fails() {
    let dir = tempfile::tempdir().unwrap();
    let (code, report) = atiyah(dir.path(), &scenario(r#"{"kind": "hopf"}"#, r#"{"kind": "hopf-canonical"}"#, r#"["flatness"]"#), &[]);
    assert_eq!(code, 1);
    let s = report.unwrap().suites.remove(0);
    assert!(!s.pass);
    assert!(s.counterexample.is_some());
    // Curvature phases of random triples reach most of (-π, π].
    assert!(s.max_defect > 1.0 && s.max_defect <= std::f64::consts::PI + 1e-12);
}

#[test]
fn schema_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = [
        scenario(r#"{"kind": "hopf"}"#, r#"{"kind": "hopf-canonical"}"#, r#"["flatnes"]"#),
        scenario(r#"{"kind": "hopf"}"#, r#"{"kind": "flat"}"#, r#"["flatness"]"#),
        "not json".to_string(),
    ];
    for text in bad {
        let (code, report) = atiyah(dir.path(), &text, &[]);
        assert_eq!(code, 2, "{text}");
        assert!(report.is_none());
    }
    let ok = scenario(r#"{"kind": "trivial"}"#, r#"{"kind": "flat"}"#, r#"["flatness"]"#);
    assert_eq!(atiyah(dir.path(), &ok, &["--samples", "0"]).0, 2);
}

#[test]
fn flags_override_file_values() {
    let dir = tempfile::tempdir().unwrap();
    let text = scenario(r#"{"kind": "trivial"}"#, r#"{"kind": "magnetic", "field": 0.5}"#, r#"["curvature"]"#);
    let (code, report) = atiyah(dir.path(), &text, &["--seed", "99", "--samples", "30", "--tol", "1e-6"]);
    assert_eq!(code, 0);
    let r = report.unwrap();
    assert_eq!((r.scenario.seed, r.scenario.samples, r.scenario.tolerance), (99, 30, 1e-6));
}

#[test]
fn reports_are_deterministic() {
    let text = scenario(r#"{"kind": "hopf"}"#, r#"{"kind": "hopf-canonical"}"#, ALL);
    let s = Scenario::from_json(&text).unwrap();
    assert_eq!(run(&s).without_timing().to_json(), run(&s).without_timing().to_json());

    let dir = tempfile::tempdir().unwrap();
    let a = atiyah(dir.path(), &text, &[]).1.unwrap();
    let b = atiyah(dir.path(), &text, &[]).1.unwrap();
    assert_eq!(a.without_timing(), b.without_timing());
}

#[test]
fn suite_order_does_not_matter() {
    let a = Scenario::from_json(&scenario(r#"{"kind": "trivial", "group": "rn", "dim": 2}"#, r#"{"kind": "flat"}"#, r#"["flatness", "roundtrips"]"#)).unwrap();
    let mut b = a.clone();
    b.suites.reverse();
    let (ra, rb) = (run(&a).without_timing(), run(&b).without_timing());
    assert_eq!(ra.suites, rb.suites);
    assert!(ra.suite(Suite::Roundtrips).unwrap().pass);
}
