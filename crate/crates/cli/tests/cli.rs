use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_endomat"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "bad json ({e}): {}\nstderr: {}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

struct Scratch(PathBuf);

impl Scratch {
    fn new(tag: &str) -> Self {
        let dir = std::env::temp_dir().join(format!("endomat-cli-{tag}-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        Scratch(dir)
    }

    fn write(&self, name: &str, v: &Value) -> PathBuf {
        let p = self.0.join(name);
        std::fs::write(&p, v.to_string()).unwrap();
        p
    }
}

impl Drop for Scratch {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.0);
    }
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn cyclic_file(n: usize) -> Value {
    let table: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
    json!({"name": format!("Z{n}"), "order": n, "table": table})
}

#[test]
fn verify_s3() {
    let out = run(&["verify", "--instance", "dihedral:3", "--theorems", "all"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["all_pass"], true);
    let r = &v["reports"][0];
    assert_eq!(r["counts"]["end"], 10);
    assert_eq!(r["counts"]["aut"], 6);
    for c in r["checks"].as_array().unwrap() {
        assert_eq!(c["status"], "pass", "{c}");
    }
    assert!(r.get("elapsed_ms").is_none());
}

#[test]
fn verify_reports_are_byte_identical() {
    let a = run(&["verify", "--instance", "dihedral:4"]);
    let b = run(&["verify", "--instance", "dihedral:4", "--jobs", "3"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json_of(&a)["reports"][0]["counts"]["aut"], 8);
}

#[test]
fn verify_selection_and_text() {
    let out = run(&[
        "verify",
        "--instance",
        "klein",
        "--theorems",
        "monoid_laws,det_k_criterion",
        "--format",
        "text",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("PASS monoid_laws"));
    assert!(text.contains("PASS det_k_criterion"));
    assert!(!text.contains("combined_inverse"));
    assert_eq!(
        run(&["verify", "--instance", "klein", "--theorems", "bogus"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn det_of_identity() {
    let dir = Scratch::new("det");
    let m = dir.write(
        "id.json",
        &json!({"alpha": [0, 1, 2], "beta": [0, 0], "gamma": [0, 0, 0], "delta": [0, 1]}),
    );
    let out = run(&["det", "--instance", "dihedral:3", "--matrix", s(&m)]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["det_H"], json!([0, 1, 2]));
    assert_eq!(v["det_K"], json!([0, 1]));
    assert_eq!(v["invertible"], true);
    assert_eq!(v["method"], "detK");
    assert_eq!(v["is_hom_H"], true);
    assert_eq!(v["is_hom_K"], true);
    assert_eq!(v["inverse"]["alpha"], json!([0, 1, 2]));
}

#[test]
fn det_undefined_determinants() {
    let dir = Scratch::new("det0");
    let m = dir.write(
        "zero.json",
        &json!({"alpha": [0, 0, 0], "beta": [0, 0], "gamma": [0, 0, 0], "delta": [0, 0]}),
    );
    let v = json_of(&run(&["det", "--instance", "dihedral:3", "--matrix", s(&m)]));
    assert_eq!(v["det_H"], Value::Null);
    assert_eq!(v["det_K"], Value::Null);
    assert_eq!(v["invertible"], false);
    assert_eq!(v["method"], "direct");
    assert_eq!(v["is_hom_H"], false);
    assert_eq!(v["inverse"], Value::Null);
}

#[test]
fn enumerate_trivial_and_exhaustive() {
    let v = json_of(&run(&["enumerate", "--instance", "trivial"]));
    assert_eq!(v["count"], 1);
    let out = run(&["enumerate", "--instance", "dihedral:3", "--exhaustive"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["count"], 10);
    assert_eq!(v["automorphisms"], 6);
    assert_eq!(v["exhaustive_agrees"], true);
    assert_eq!(
        run(&["enumerate", "--instance", "dihedral:7", "--exhaustive"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn invert_and_factor() {
    let dir = Scratch::new("inv");
    // (h, k) -> (2h + k, k) on S3
    let m = dir.write(
        "m.json",
        &json!({"alpha": [0, 2, 1], "beta": [0, 1], "gamma": [0, 0, 0], "delta": [0, 1]}),
    );
    for method in ["auto", "det-k", "det-h", "combined", "direct"] {
        let out = run(&[
            "invert",
            "--instance",
            "dihedral:3",
            "--matrix",
            s(&m),
            "--method",
            method,
        ]);
        assert_eq!(out.status.code(), Some(0), "{method}");
        let v = json_of(&out);
        assert_eq!(v["alpha"], json!([0, 2, 1]), "{method}");
        assert_eq!(v["beta"], json!([0, 1]), "{method}");
        assert_eq!(v["verified"], true);
    }
    let v = json_of(&run(&["factor", "--instance", "dihedral:3", "--matrix", s(&m)]));
    assert_eq!(v["verified"], true);
    assert_eq!(v["a"]["alpha"], json!([0, 2, 1]));
    assert_eq!(v["b"]["beta"], json!([0, 2]));
    assert_eq!(v["c"]["gamma"], json!([0, 0, 0]));
    assert_eq!(v["d"]["delta"], json!([0, 1]));

    let zero = dir.write(
        "z.json",
        &json!({"alpha": [0, 0, 0], "beta": [0, 0], "gamma": [0, 0, 0], "delta": [0, 0]}),
    );
    assert_eq!(
        run(&["invert", "--instance", "dihedral:3", "--matrix", s(&zero)])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["factor", "--instance", "dihedral:3", "--matrix", s(&zero)])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn files_instead_of_catalog() {
    let dir = Scratch::new("files");
    let h = dir.write("z3.json", &cyclic_file(3));
    let k = dir.write("z2.json", &cyclic_file(2));
    let action = dir.write(
        "s3.json",
        &json!({"H": "z3.json", "K": "z2.json", "images": [[0, 1, 2], [0, 2, 1]]}),
    );
    let v = json_of(&run(&["enumerate", "--action", s(&action)]));
    assert_eq!(v["count"], 10);
    let v = json_of(&run(&["enumerate", "--group-h", s(&h), "--group-k", s(&k)]));
    assert_eq!(v["count"], 6);

    let v = json_of(&run(&["census", "--group-h", s(&h), "--group-k", s(&k)]));
    let rows = v["instances"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0]["end"], 6);
    assert_eq!(rows[1]["end"], 10);
    assert_eq!(v["agrees"], true);

    let bad = dir.write(
        "bad.json",
        &json!({"H": "z3.json", "K": "z2.json", "images": [[0, 1, 2], [0, 0, 0]]}),
    );
    let out = run(&["enumerate", "--action", s(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn census_default_catalog() {
    let out = run(&["census", "--format", "text"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text
        .lines()
        .any(|l| l.starts_with("dihedral:5") && l.split_whitespace().nth(3) == Some("20")));
}

#[test]
fn invalid_input_exit_codes() {
    assert_eq!(run(&["enumerate", "--instance", "nope:3"]).status.code(), Some(2));
    assert_eq!(run(&["enumerate"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        run(&["verify", "--instance", "dihedral:5", "--bound", "8"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["det", "--instance", "dihedral:3", "--matrix", "/nonexistent/m.json"])
            .status
            .code(),
        Some(2)
    );
    let dir = Scratch::new("bad");
    // delta = 0 breaks the action compatibility condition on S3
    let m = dir.write(
        "m.json",
        &json!({"alpha": [0, 1, 2], "beta": [0, 0], "gamma": [0, 0, 0], "delta": [0, 0]}),
    );
    let out = run(&["det", "--instance", "dihedral:3", "--matrix", s(&m)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not an endomorphism matrix"));
    let short = dir.write(
        "short.json",
        &json!({"alpha": [0, 1], "beta": [0, 0], "gamma": [0, 0, 0], "delta": [0, 1]}),
    );
    assert_eq!(
        run(&["det", "--instance", "dihedral:3", "--matrix", s(&short)])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}
