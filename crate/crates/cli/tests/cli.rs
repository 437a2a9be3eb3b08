use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use relk_core::catalog::bundled;
use relk_core::format::read_complex;
use serde_json::{json, Value};
use tempfile::TempDir;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(format!("{name}.json"))
}

fn relk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_relk")).args(args).output().expect("relk runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write(dir: &TempDir, name: &str, value: &Value) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, value.to_string()).unwrap();
    p
}

#[test]
fn bundled_files_match_the_catalog() {
    for e in bundled() {
        let text = std::fs::read_to_string(data(e.name)).unwrap();
        assert_eq!(read_complex(&text).unwrap().complex, e.complex, "{}", e.name);
    }
}

#[test]
fn validate_accepts_bundled_files() {
    for e in bundled() {
        let out = relk(&["validate", path(&data(e.name))]);
        assert_eq!(code(&out), 0, "{}", e.name);
    }
}

#[test]
fn validate_names_the_failing_degree() {
    let dir = TempDir::new().unwrap();
    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(data("rp2")).unwrap()).unwrap();
    doc["differentials"]["2"] = json!([[[2, 1]]]);
    let out = relk(&["validate", path(&write(&dir, "bad.json", &doc))]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stdout).contains("d_1 o d_2 is not zero"));
}

#[test]
fn validate_rejects_malformed_json() {
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("broken.json");
    std::fs::write(&p, "{\"format\": 1, \"group\": ").unwrap();
    assert_eq!(code(&relk(&["validate", path(&p)])), 2);
    assert_eq!(code(&relk(&["validate", "/nonexistent/file.json"])), 2);
}

#[test]
fn homology_of_rp2() {
    let out = relk(&["homology", path(&data("rp2"))]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["homology"]["0"]["gens"], 0);
    assert_eq!(v["homology"]["1"]["gens"], 0);
    assert_eq!(v["homology"]["2"]["gens"], 1);
}

#[test]
fn k_invariant_of_rp2_is_nonzero() {
    let out = relk(&["k", path(&data("rp2"))]);
    assert_eq!(code(&out), 1);
    let v = stdout_json(&out);
    assert_eq!(v["verdict"], "nonzero");
    assert_eq!(v["invariant_factors"], json!([2]));
    assert_eq!(v["coordinates"], json!([1]));
    assert!(v["representative"].is_array());
    assert_eq!(v["module"]["gens"], 1);
}

#[test]
fn k_invariant_of_s2_has_trivial_cone() {
    let out = relk(&["k", path(&data("s2"))]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out)["verdict"], "zero (trivial cone)");
}

#[test]
fn relative_k_invariant_reports_pullback_consistency() {
    let out = relk(&["k", path(&data("rp2")), "--sub", "skeleton1"]);
    assert!(matches!(code(&out), 0 | 1));
    let v = stdout_json(&out);
    assert_eq!(v["pullback_consistent"], true);
    assert_eq!(v["zero"], code(&out) == 0);
}

#[test]
fn k_rejects_short_resolutions_and_bad_subs() {
    assert_eq!(code(&relk(&["k", path(&data("rp2")), "--resolution-top", "3"])), 2);
    assert_eq!(code(&relk(&["k", path(&data("rp2")), "--sub", "middle"])), 2);
    assert_eq!(code(&relk(&["k", path(&data("rp2")), "--sub", "file"])), 2);
}

#[test]
fn identity_datum_extends_by_the_identity() {
    let dir = TempDir::new().unwrap();
    let out_path = dir.path().join("f.json");
    let out = relk(&["extend", path(&data("rp2")), path(&data("rp2")), "--out", path(&out_path)]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(v["outcome"], "extended");
    for i in ["0", "1", "2"] {
        assert_eq!(v["f"][i], json!([[[1, 0]]]), "degree {i}");
    }
}

#[test]
fn zero_on_rp2_is_obstructed() {
    let out = relk(&["extend", path(&data("rp2")), path(&data("rp2")), "--F", "zero"]);
    assert_eq!(code(&out), 1);
    let v = stdout_json(&out);
    assert_eq!(v["outcome"], "obstructed");
    assert_eq!(v["coordinates"], json!([1]));
}

#[test]
fn mismatched_groups_without_iso_are_rejected() {
    let out = relk(&["extend", path(&data("rp2")), path(&data("c3"))]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("group orders differ"));
}

#[test]
fn extension_along_an_automorphism() {
    let dir = TempDir::new().unwrap();
    let h = write(&dir, "h.json", &json!({ "format": 1, "iso": [0, 2, 1] }));
    let run = |m: Value| {
        let f = write(&dir, "F.json", &json!({ "format": 1, "matrix": m }));
        code(&relk(&["extend", path(&data("c3")), path(&data("c3")), "--h", path(&h), "--F", path(&f)]))
    };
    assert_eq!(run(json!([[0, -1], [-1, 0]])), 0);
    assert_eq!(run(json!([[0, 1], [1, 0]])), 1);
    assert_eq!(run(json!([[1, 0], [0, 1]])), 2);
}

#[test]
fn check_runs_named_suites() {
    let out = relk(&["check", "well-defined", "--seed", "1", "--trials", "20"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out)["passed"], true);
    assert_eq!(code(&relk(&["check", "phi-ev-delta", "--seed", "3", "--trials", "10"])), 0);
    assert_eq!(code(&relk(&["check", "no-such-lemma"])), 2);
}

#[test]
fn resolve_emits_a_valid_complex() {
    let dir = TempDir::new().unwrap();
    for (group, extra) in [("c3", None), ("s3", None), ("c4", Some("--periodic"))] {
        let p = dir.path().join(format!("{group}.json"));
        let mut args = vec!["resolve", group, "--top", "4", "--out", path(&p)];
        args.extend(extra);
        assert_eq!(code(&relk(&args)), 0, "{group}");
        assert_eq!(code(&relk(&["validate", path(&p)])), 0, "{group}");
    }
    assert_eq!(code(&relk(&["resolve", "s3", "--periodic"])), 2);
}
