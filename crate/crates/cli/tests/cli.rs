use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use spectral_twist::document::TripleDocument;

const BIN: &str = env!("CARGO_BIN_EXE_spectral-twist");

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("invalid JSON ({e}): {}", stdout(o)))
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn validate_accepts_the_ko0_toy() {
    let o = run(&["validate", path_str(&fixture("ko0_toy.json"))]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).trim_end().ends_with("PASS"));
}

#[test]
fn validate_names_the_failed_axiom() {
    let o = run(&["validate", path_str(&fixture("non_selfadjoint.json"))]);
    assert_eq!(code(&o), 1);
    let text = stdout(&o);
    assert!(text.lines().any(|l| l.starts_with("[FAIL]") && l.contains("D selfadjoint")), "{text}");
}

#[test]
fn malformed_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let text = fs::read_to_string(fixture("ko0_toy.json")).unwrap();
    let truncated = dir.path().join("truncated.json");
    fs::write(&truncated, &text[..text.len() / 2]).unwrap();
    let o = run(&["validate", path_str(&truncated)]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line"));
    let o = run(&["--json", "validate", path_str(&truncated)]);
    assert_eq!(code(&o), 2);
    assert!(json(&o)["error"].is_string());
    assert_eq!(code(&run(&["validate", "/nonexistent/triple.json"])), 2);
}

#[test]
fn twist_by_grading_output_validates() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("twisted.json");
    let o = run(&["twist-by-grading", path_str(&fixture("ko0_toy.json")), "-o", path_str(&out)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let doc = TripleDocument::parse(&fs::read_to_string(&out).unwrap()).unwrap();
    assert!(doc.twist.is_some());
    assert_eq!(doc.metadata["twist_by_grading"], Value::Bool(true));
    let o = run(&["validate", path_str(&out)]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("twisted first order"));

    let again = run(&["twist-by-grading", path_str(&out)]);
    assert_eq!(code(&again), 2);
}

#[test]
fn ungraded_input_cannot_be_twisted() {
    let dir = tempfile::tempdir().unwrap();
    let mut doc: Value = serde_json::from_str(&fs::read_to_string(fixture("ko0_toy.json")).unwrap()).unwrap();
    doc.as_object_mut().unwrap().remove("grading");
    let signs = doc["signs"].as_object_mut().unwrap();
    signs.remove("eps_dprime");
    let path = dir.path().join("ungraded.json");
    fs::write(&path, doc.to_string()).unwrap();
    assert_eq!(code(&run(&["validate", path_str(&path)])), 0);
    let o = run(&["twist-by-grading", path_str(&path)]);
    assert_eq!(code(&o), 2);
}

#[test]
fn twisting_the_emitted_fiber_reproduces_the_emitted_twisted_model() {
    let dir = tempfile::tempdir().unwrap();
    let fiber = dir.path().join("fiber.json");
    let twisted = dir.path().join("twisted.json");
    let o = run(&["sm", "--emit-fiber", path_str(&fiber), "--emit-twisted", path_str(&twisted)]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let o = run(&["twist-by-grading", path_str(&fiber)]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), fs::read_to_string(&twisted).unwrap());
}

#[test]
fn real_part_of_the_twisted_standard_model() {
    let dir = tempfile::tempdir().unwrap();
    let twisted = dir.path().join("twisted.json");
    assert_eq!(code(&run(&["sm", "--emit-twisted", path_str(&twisted)])), 0);
    let o = run(&["--json", "real-part", path_str(&twisted)]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let v = json(&o);
    assert_eq!(v["dimension"], 1);
    assert_eq!(v["structure"], "R");
    assert_eq!(v["passed"], true);
    let entries = v["twisted_checks"]["entries"].as_array().unwrap();
    assert!(!entries.is_empty() && entries.iter().all(|e| e["passed"] == true));
}

#[test]
fn real_part_of_the_twisted_ko6_toy_takes_the_intersection_branch() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("twisted.json");
    assert_eq!(code(&run(&["twist-by-grading", path_str(&fixture("ko6_toy.json")), "-o", path_str(&out)])), 0);
    let o = run(&["--json", "real-part", path_str(&out)]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let v = json(&o);
    let branch = &v["grading_branch"];
    assert_eq!(branch["branch"], "intersection");
    assert_eq!(branch["a_j_dim"], 1);
    assert_eq!(branch["intersection_dim"], 2);
    assert_eq!(branch["doubled_real_part_dim"], 2);
    assert_eq!(v["dimension"], 2);
}

#[test]
fn real_part_requires_a_real_structure() {
    let dir = tempfile::tempdir().unwrap();
    let mut doc: Value = serde_json::from_str(&fs::read_to_string(fixture("ko0_toy.json")).unwrap()).unwrap();
    let obj = doc.as_object_mut().unwrap();
    obj.remove("real_structure");
    obj.remove("signs");
    let path = dir.path().join("no_j.json");
    fs::write(&path, doc.to_string()).unwrap();
    let o = run(&["real-part", path_str(&path)]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("real structure required"));
}

#[test]
fn fuzz_is_deterministic_and_passes() {
    let args = ["--json", "fuzz", "--seed", "1", "--count", "10", "--ko", "0"];
    let a = run(&args);
    assert_eq!(code(&a), 0, "{}", stdout(&a));
    let v = json(&a);
    assert_eq!(v["campaigns"][0]["passed"], 10);
    assert_eq!(v["campaigns"][0]["product_branch"], 10);
    let b = run(&args);
    assert_eq!(v["cases"], json(&b)["cases"]);
}

#[test]
fn fuzz_ko6_always_takes_the_intersection_branch() {
    let o = run(&["--json", "fuzz", "--seed", "7", "--count", "20", "--ko", "6"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let v = json(&o);
    assert_eq!(v["campaigns"][0]["intersection_branch"], 20);
    assert!(v["cases"].as_array().unwrap().iter().all(|c| c["branch"] == "intersection"));
}

#[test]
fn fuzz_rejects_an_odd_ko_class() {
    assert_eq!(code(&run(&["fuzz", "--ko", "3"])), 2);
}

#[test]
fn float_mode_agrees_on_the_toys() {
    let o = run(&["--mode", "float", "--tol", "1e-10", "validate", path_str(&fixture("ko6_toy.json"))]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let o = run(&["--mode", "float", "--json", "fuzz", "--count", "5"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert_eq!(json(&o)["mode"], "float");
}

#[test]
fn json_reports_parse() {
    for args in [
        vec!["--json", "validate", "fixtures/ko0_toy.json"],
        vec!["--json", "validate", "fixtures/non_selfadjoint.json"],
        vec!["--json", "real-part", "fixtures/ko6_toy.json"],
        vec!["--json", "sm", "--k-r", "0"],
    ] {
        let o = Command::new(BIN).args(&args).current_dir(env!("CARGO_MANIFEST_DIR")).output().unwrap();
        let v = json(&o);
        assert!(v["passed"].is_boolean(), "{args:?}: {v}");
    }
}

#[test]
fn fixtures_are_canonical() {
    for name in ["ko0_toy.json", "ko6_toy.json", "non_selfadjoint.json"] {
        let text = fs::read_to_string(fixture(name)).unwrap();
        let doc = TripleDocument::parse(&text).unwrap();
        assert_eq!(doc.to_json_string() + "\n", text, "{name}");
    }
}
