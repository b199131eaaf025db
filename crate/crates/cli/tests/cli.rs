use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures")
}

fn golden_csv() -> &'static [u8] {
    include_bytes!("../../core/tests/golden/uva_matrix.csv")
}

fn llmrisk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_llmrisk"))
        .args(args)
        .env_remove("LLMRISK_SCHEME")
        .env_remove("LLMRISK_CATALOG")
        .output()
        .expect("spawn llmrisk")
}

fn fixture(name: &str) -> String {
    fixtures().join(name).display().to_string()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn evaluate_prints_worked_example() {
    let out = llmrisk(&["evaluate", &fixture("prompt_injection")]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = stdout(&out);
    assert!(text.contains("6.75"));
    assert!(text.contains("HIGH"));
    assert!(text.contains("Likelihood Score:"));
    assert!(text.contains("9 - Automated tools available"));
    assert!(!text.contains('\x1b'), "no color when piped");
}

#[test]
fn evaluate_json_is_one_document() {
    let out = llmrisk(&[
        "evaluate",
        &fixture("training_data_poisoning.json"),
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let value: Value = serde_json::from_str(&text).expect("stdout is exactly one JSON document");
    assert_eq!(value["likelihood_score"], "4.25");
    assert_eq!(value["final_impact_score"], "5.5");
    assert_eq!(value["severity"], "MEDIUM");
    assert!(text.ends_with("}\n"));
}

#[test]
fn evaluate_missing_file_is_io_error() {
    let out = llmrisk(&["evaluate", "definitely_missing_file"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(out.stdout.is_empty());
    assert!(!out.stderr.is_empty());
}

#[test]
fn evaluate_incomplete_document_fails() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("partial.json");
    let text = std::fs::read_to_string(fixtures().join("prompt_injection.json")).unwrap();
    let mut doc: Value = serde_json::from_str(&text).unwrap();
    doc["status"] = "analyzed".into();
    doc["impact"]["business"].as_array_mut().unwrap().pop();
    std::fs::write(&path, doc.to_string()).unwrap();
    let out = llmrisk(&["evaluate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("privacy_violation"));
}

#[test]
fn matrix_csv_matches_golden() {
    let out = llmrisk(&[
        "matrix",
        &fixtures().display().to_string(),
        "--format",
        "csv",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(out.stdout, golden_csv());
}

#[test]
fn matrix_writes_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("m.csv");
    let out = llmrisk(&[
        "matrix",
        &fixtures().display().to_string(),
        "--out",
        target.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read(&target).unwrap(), golden_csv());
}

#[test]
fn matrix_stakeholder_filter_and_formats() {
    let dir = fixtures().display().to_string();
    let out = llmrisk(&[
        "matrix",
        &dir,
        "--stakeholder",
        "end_user",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let value: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(value["rows"].as_array().unwrap().len(), 7);

    let md = llmrisk(&["matrix", &dir, "--format", "md"]);
    assert_eq!(md.status.code(), Some(0));
    assert_eq!(stdout(&md).lines().count(), 12);

    let bad = llmrisk(&["matrix", &dir, "--format", "pdf"]);
    assert_eq!(bad.status.code(), Some(2));
    let missing = llmrisk(&["matrix", "no/such/dir"]);
    assert_eq!(missing.status.code(), Some(3));
}

#[test]
fn repeated_runs_are_identical() {
    let runs: Vec<_> = (0..3)
        .map(|_| llmrisk(&["evaluate", &fixture("prompt_injection"), "--format", "json"]).stdout)
        .collect();
    assert!(runs.windows(2).all(|w| w[0] == w[1]));
    let text: Vec<_> = (0..3)
        .map(|_| llmrisk(&["evaluate", &fixture("prompt_injection")]).stdout)
        .collect();
    assert!(text.windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn whatif_before_and_after() {
    let dir = tempfile::tempdir().unwrap();
    let adj = dir.path().join("filtering.json");
    std::fs::write(
        &adj,
        r#"{"label":"Robust input filtering","overrides":{"ease_of_exploit":3,"ease_of_discovery":3}}"#,
    )
    .unwrap();
    let out = llmrisk(&[
        "whatif",
        &fixture("prompt_injection"),
        "--adjust",
        adj.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let value: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(value["before"]["likelihood_score"], "6.75");
    assert_eq!(value["after"]["likelihood_score"], "5.75");
    assert_eq!(value["after"]["severity"], "MEDIUM");
    assert_eq!(
        value["before"]["final_impact_score"],
        value["after"]["final_impact_score"]
    );

    let text = llmrisk(&[
        "whatif",
        &fixture("prompt_injection"),
        "--adjust",
        adj.to_str().unwrap(),
    ]);
    assert!(stdout(&text).contains("5.75"));
}

#[test]
fn validate_detects_kind() {
    let dir = tempfile::tempdir().unwrap();
    let ok = llmrisk(&["validate", &fixture("prompt_injection.json")]);
    assert_eq!(ok.status.code(), Some(0));

    let scheme = dir.path().join("scheme.json");
    let export = llmrisk(&["scheme", "export", "--out", scheme.to_str().unwrap()]);
    assert_eq!(export.status.code(), Some(0));
    let out = llmrisk(&["validate", scheme.to_str().unwrap(), "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["errors"], serde_json::json!([]));

    let catalog = dir.path().join("catalog.json");
    llmrisk(&["catalog", "export", "--out", catalog.to_str().unwrap()]);
    assert_eq!(
        llmrisk(&["validate", catalog.to_str().unwrap()])
            .status
            .code(),
        Some(0)
    );

    let mut broken: Value =
        serde_json::from_str(&std::fs::read_to_string(&scheme).unwrap()).unwrap();
    broken["likelihood_thresholds"]["medium"] = "7".into();
    std::fs::write(&scheme, broken.to_string()).unwrap();
    let bad = llmrisk(&["validate", scheme.to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stdout(&bad).contains("thresholds_not_ascending"));
}

#[test]
fn scheme_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let scheme = dir.path().join("scheme.json");
    llmrisk(&["scheme", "export", "--out", scheme.to_str().unwrap()]);
    let mut value: Value =
        serde_json::from_str(&std::fs::read_to_string(&scheme).unwrap()).unwrap();
    // Only business impact counts toward the final impact.
    value["impact_mode"] = "business_only".into();
    std::fs::write(&scheme, value.to_string()).unwrap();

    let out = Command::new(env!("CARGO_BIN_EXE_llmrisk"))
        .args(["evaluate", &fixture("prompt_injection"), "--format", "json"])
        .env("LLMRISK_SCHEME", &scheme)
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let rating: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(rating["final_impact_score"], "6");
    assert_eq!(rating["impact_level"], "HIGH");
    assert_eq!(rating["severity"], "CRITICAL");
}

#[test]
fn catalog_listing() {
    let all = llmrisk(&["catalog", "list", "--format", "json"]);
    let entries: Vec<Value> = serde_json::from_slice(&all.stdout).unwrap();
    assert_eq!(entries.len(), 10);
    for (group, n) in [
        ("fine_tuning_developer", 9),
        ("api_integration_developer", 7),
        ("end_user", 7),
    ] {
        let out = llmrisk(&["catalog", "list", "--stakeholder", group]);
        assert_eq!(stdout(&out).lines().count(), n, "{group}");
    }
    let trad = llmrisk(&["catalog", "list", "--traditional"]);
    assert_eq!(stdout(&trad).lines().count(), 3);
    let bad = llmrisk(&["catalog", "list", "--stakeholder", "auditor"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(llmrisk(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(llmrisk(&["evaluate"]).status.code(), Some(2));
    assert_eq!(
        llmrisk(&["evaluate", &fixture("prompt_injection"), "--bogus"])
            .status
            .code(),
        Some(2)
    );
}
