use std::path::PathBuf;
use std::process::{Command, Output};

fn data(rel: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(rel);
    p.to_str().unwrap().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_enriques-nd"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn tmp_file(name: &str, text: &str) -> String {
    let p = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn verify_case_158() {
    let o = run(&[
        "verify",
        "--case",
        &data("cases/158.json"),
        "--cert",
        &data("certs/158.json"),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("F G F^T = 1_9 - I_9"));
    assert_eq!(out.matches("Ã1^F").count(), 6);
    assert_eq!(out.matches("D̃4^F").count(), 2);
    assert!(out.contains("R2+R8  Ã1^HF"));
}

#[test]
fn verify_case_145() {
    let o = run(&[
        "verify",
        "--case",
        &data("cases/145.json"),
        "--cert",
        &data("certs/145.json"),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("1_4 - I_4"));
}

#[test]
fn verify_missing_file_is_data_error() {
    let o = run(&["verify", "--case", "/nonexistent/145.json"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_corpus_directory() {
    let o = run(&["verify", "--case", &data("cases"), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["schema_version"], 1);
    assert_eq!(doc["passed"], 2);
    assert_eq!(doc["failed"], 0);
    assert_eq!(doc["skipped"], 153);
}

#[test]
fn verify_wrong_claim_fails() {
    let text = std::fs::read_to_string(data("certs/145.json")).unwrap();
    let bad = text.replacen("\"claimed_bound\": 4", "\"claimed_bound\": 5", 1);
    assert_ne!(bad, text);
    let cert = tmp_file("claim5.json", &bad);
    let o = run(&["verify", "--case", &data("cases/145.json"), "--cert", &cert]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn verify_unknown_generator_is_data_error() {
    let text = std::fs::read_to_string(data("certs/145.json")).unwrap();
    // attach a word in a generator the case does not have
    let bad = text.replacen("\"word\": []", "\"word\": [[\"H9\", 1]]", 1);
    assert_ne!(bad, text);
    let cert = tmp_file("h9.json", &bad);
    let o = run(&["verify", "--case", &data("cases/145.json"), "--cert", &cert]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn cnd_case_158() {
    let o = run(&["cnd", "--case", &data("cases/158.json"), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(doc["cnd"].as_u64().unwrap() >= 9);
    assert_eq!(
        doc["witness"].as_array().unwrap().len() as u64,
        doc["cnd"].as_u64().unwrap()
    );
}

#[test]
fn cnd_case_145_radius_0_and_3() {
    for r in ["0", "3"] {
        let o = run(&["cnd", "--case", &data("cases/145.json"), "--radius", r]);
        assert_eq!(o.status.code(), Some(0));
        let out = stdout(&o);
        assert!(out.contains("cnd = 4\n"), "{out}");
        assert!(out.contains("½("));
    }
}

#[test]
fn cnd_without_pruning_agrees() {
    let o = run(&["cnd", "--case", "145", "--no-prune", "--max-support", "9"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("cnd = 4\n"));
}

#[test]
fn max_support_out_of_range() {
    for bad in ["1", "11"] {
        let o = run(&["cnd", "--case", "145", "--max-support", bad]);
        assert_eq!(o.status.code(), Some(2));
    }
}

#[test]
fn proof_default_run() {
    let o = run(&["case145-proof"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(
        out.lines().last(),
        Some("cnd = 4, nd = 4 (equality under the listed assumptions)")
    );
}

#[test]
fn proof_steps_cannot_be_skipped() {
    let o = run(&["case145-proof", "--skip-step", "a7-invariance"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn proof_on_corrupted_snapshot_fails() {
    // swap the labels of R3 and R9; the file still parses and validates
    let text = std::fs::read_to_string(data("cases/145.json")).unwrap();
    let bad = text
        .replace("\"R3\"", "\"TMP\"")
        .replace("\"R9\"", "\"R3\"")
        .replace("\"TMP\"", "\"R9\"");
    let path = tmp_file("145-swapped.json", &bad);
    let o = run(&["case145-proof", "--case", &path, "--format", "json"]);
    assert_eq!(o.status.code(), Some(1));
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["passed"], false);
    assert!(doc["failed_step"].is_string());
}

#[test]
fn proof_rejects_other_cases() {
    let o = run(&["case145-proof", "--case", &data("cases/158.json")]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn orbit_radius_1_contains_translate() {
    let o = run(&["orbit", "--case", &data("cases/145.json"), "--radius", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("(10,4,11,18,15,12,9,6,4,2)"));
    assert!(out.contains("R8·gamma"));
}

#[test]
fn orbit_radius_0_echoes_input() {
    let o = run(&[
        "orbit",
        "--case",
        &data("cases/158.json"),
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let curves = doc["curves"].as_array().unwrap();
    assert_eq!(curves.len(), 16);
    assert_eq!(curves[15]["label"], "R2·H2");
}

#[test]
fn orbit_without_generators_is_data_error() {
    let text = std::fs::read_to_string(data("cases/145.json")).unwrap();
    let mut doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    doc["automorphisms"] = serde_json::json!({});
    let path = tmp_file("145-nogens.json", &doc.to_string());
    let o = run(&["orbit", "--case", &path, "--radius", "1"]);
    assert_eq!(o.status.code(), Some(2));
}
