use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const K4: &str = r#"{"vertices":4,"edges":[[0,1],[0,2],[0,3],[1,2],[1,3],[2,3]],"name":"K4"}"#;
const PETERSEN: &str = r#"{"vertices":10,"edges":[[0,1],[1,2],[2,3],[3,4],[4,0],[0,5],[1,6],[2,7],[3,8],[4,9],[5,7],[7,9],[9,6],[6,8],[8,5]],"name":"Petersen"}"#;
const LOOP: &str = r#"{"vertices":1,"edges":[[0,0]],"name":"loop"}"#;
const BOUQUET2: &str = r#"{"vertices":1,"edges":[[0,0],[0,0]],"name":"bouquet-2"}"#;
const Z2: &str = r#"{"group":{"free":2},"voltages":[[1,0],[0,1]]}"#;
const CYCLIC_LOOP: &str = r#"{"base":"loop.json","kind":"cyclic","voltages":[1],"orders":[1,2,4,8,16]}"#;
const HOMOLOGY: &str = r#"{"base":"bouquet2.json","kind":"homology","p":2,"depth":2}"#;

fn workspace() -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    for (name, text) in [
        ("k4.json", K4),
        ("petersen.json", PETERSEN),
        ("loop.json", LOOP),
        ("bouquet2.json", BOUQUET2),
        ("z2.json", Z2),
        ("cyclic_loop.json", CYCLIC_LOOP),
        ("homology.json", HOMOLOGY),
    ] {
        fs::write(dir.path().join(name), text).unwrap();
    }
    dir
}

fn ihara(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ihara"))
        .args(args)
        .current_dir(dir)
        .env_remove("ZETA_SIZE_CAP")
        .output()
        .unwrap()
}

fn summary(out: &Output) -> Value {
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(text.lines().count(), 1, "stdout: {text}");
    serde_json::from_str(text.trim()).unwrap()
}

fn ok(dir: &Path, args: &[&str]) -> Value {
    let out = ihara(dir, args);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    summary(&out)
}

#[test]
fn compute_writes_polynomial_and_value() {
    let ws = workspace();
    let s = ok(ws.path(), &["zeta", "compute", "--graph", "k4.json", "--emit", "poly.json", "--eval", "0.25"]);
    let poly = fs::read_to_string(ws.path().join("poly.json")).unwrap();
    // (1-u)(1-2u)(1+u+2u^2)^3
    assert_eq!(poly.trim(), "[1,0,2,-8,-3,-16,8,0,16]");
    // (1-u^2)^2 (0.75)(0.5)(1.375)^3 at u = 1/4
    let expected = (1.0f64 - 0.0625).powi(2) * 0.75 * 0.5 * 1.375f64.powi(3);
    let z = s["values"][0]["zeta"][0].as_f64().unwrap();
    assert!((z - expected).abs() < 1e-12);
    assert_eq!(s["values"][0]["zeta"][1].as_f64().unwrap(), 0.0);
    assert!(ws.path().join("poly.json.manifest.json").exists());
}

#[test]
fn petersen_zeros_lie_on_c() {
    let ws = workspace();
    let s = ok(
        ws.path(),
        &["zeta", "zeros", "--graph", "petersen.json", "--check-C", "--tol", "1e-8", "--out", "zeros.csv"],
    );
    assert_eq!(s["all_on_C"], Value::Bool(true));
    // 20 from the determinant, 10 from (1-u^2)^5
    assert_eq!(s["total_multiplicity"], 30);
    let csv = fs::read_to_string(ws.path().join("zeros.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("re,im,multiplicity,dist_to_C"));
}

#[test]
fn checks_pass_on_k4() {
    let ws = workspace();
    let s = ok(ws.path(), &["zeta", "euler-check", "--graph", "k4.json", "--terms", "8"]);
    assert_eq!(s["agree"], Value::Bool(true));
    // N_3 = 24 closed non-backtracking walks of length 3
    assert_eq!(s["log_coefficients"][2], "-8");
    let s = ok(ws.path(), &["zeta", "functional-check", "--graph", "k4.json", "--random", "30", "--at", "0.3i"]);
    assert!(s["max_relative_residual"].as_f64().unwrap() < 1e-9);
    let s = ok(ws.path(), &["deitmar", "check", "--graph", "petersen.json", "--grid", "disk:0.6:12:0.05"]);
    assert!(s["max_residual"].as_f64().unwrap() < 1e-10);
}

#[test]
fn cover_build_writes_a_graph() {
    let ws = workspace();
    fs::write(ws.path().join("klein.json"), r#"{"group":{"finite":[2,2]},"voltages":[[1,0],[0,1]]}"#).unwrap();
    let s = ok(ws.path(), &["cover", "build", "--graph", "bouquet2.json", "--voltages", "klein.json", "--out", "c.json"]);
    assert_eq!(s["vertices"], 4);
    assert_eq!(s["connected"], Value::Bool(true));
    let g: Value = serde_json::from_str(&fs::read_to_string(ws.path().join("c.json")).unwrap()).unwrap();
    assert_eq!(g["edges"].as_array().unwrap().len(), 8);
}

#[test]
fn tower_build_lists_levels() {
    let ws = workspace();
    let s = ok(ws.path(), &["tower", "build", "--spec", "homology.json", "--out", "tower"]);
    assert_eq!(s["vertex_counts"], serde_json::json!([1, 4, 128]));
    for f in ["level_1.json", "level_2.json", "level_3.json", "tower.json", "manifest.json"] {
        assert!(ws.path().join("tower").join(f).exists(), "{f}");
    }
}

#[test]
fn cycle_tower_run_converges() {
    let ws = workspace();
    let s = ok(
        ws.path(),
        &["tower", "run", "--spec", "cyclic_loop.json", "--target", "constant:1", "--grid", "disk:0.5:32:0.05", "--out", "report"],
    );
    assert_eq!(s["strictly_decreasing"], Value::Bool(true));
    assert_eq!(s["limit_verified"], Value::Bool(true));
    let last = s["sup_errors"].as_array().unwrap().last().unwrap().as_f64().unwrap();
    assert!(last < 1e-5);
    for f in ["report.json", "error_field.csv", "c_overlay.csv", "manifest.json"] {
        assert!(ws.path().join("report").join(f).exists(), "{f}");
    }
}

fn read_all(dir: &Path, files: &[&str]) -> Vec<Vec<u8>> {
    files.iter().map(|f| fs::read(dir.join(f)).unwrap()).collect()
}

#[test]
fn reruns_are_byte_identical_and_independent_of_jobs() {
    let ws = workspace();
    let files = ["report.json", "error_field.csv", "c_overlay.csv", "manifest.json"];
    let args = |jobs: &'static str| {
        [
            "--jobs", jobs, "tower", "run", "--spec", "homology.json", "--target", "constant:1", "--grid",
            "disk:0.3:16:0.05", "--out", "out",
        ]
    };
    let first_line = ok(ws.path(), &args("1"));
    let first = read_all(&ws.path().join("out"), &files);
    let second_line = ok(ws.path(), &args("4"));
    let second = read_all(&ws.path().join("out"), &files);
    assert_eq!(first, second);
    assert_eq!(first_line, second_line);
}

#[test]
fn torus_target_and_l2_exports() {
    let ws = workspace();
    fs::write(
        ws.path().join("torus.json"),
        r#"{"base":"bouquet2.json","kind":"cyclic","voltages":[[1,0],[0,1]],"orders":[1,2,4,8]}"#,
    )
    .unwrap();
    let s = ok(
        ws.path(),
        &["tower", "run", "--spec", "torus.json", "--target", "torus:z2.json", "--grid", "disk:0.25:16:0.05", "--out", "t"],
    );
    assert_eq!(s["strictly_decreasing"], Value::Bool(true));
    ok(ws.path(), &["l2", "torus", "--graph", "bouquet2.json", "--voltages", "z2.json", "--grid", "disk:0.25:8:0.05", "--out", "l2.csv"]);
    let csv = fs::read_to_string(ws.path().join("l2.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("re,im,value_re,value_im"));
    let s = ok(ws.path(), &["l2", "cdf", "--graph", "bouquet2.json", "--voltages", "z2.json", "--points", "8", "--out", "cdf.csv"]);
    assert!((s["mass"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    let csv = fs::read_to_string(ws.path().join("cdf.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("lambda,F"));
}

#[test]
fn usage_and_input_errors_exit_1() {
    let ws = workspace();
    assert_eq!(ihara(ws.path(), &["zeta", "compute", "--graph", "k4.json", "--bogus"]).status.code(), Some(1));
    assert_eq!(ihara(ws.path(), &["frobnicate"]).status.code(), Some(1));
    let out = ihara(ws.path(), &["zeta", "compute", "--graph", "nope.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(summary(&out)["status"], "error");
    let grid_too_wide = ["deitmar", "check", "--graph", "k4.json", "--grid", "disk:0.9:8:0.05"];
    assert_eq!(ihara(ws.path(), &grid_too_wide).status.code(), Some(1));
    assert_eq!(ihara(ws.path(), &["--help"]).status.code(), Some(0));
}

#[test]
fn size_cap_from_environment_exits_2() {
    let ws = workspace();
    let out = Command::new(env!("CARGO_BIN_EXE_ihara"))
        .args(["tower", "build", "--spec", "homology.json", "--out", "t"])
        .current_dir(ws.path())
        .env("ZETA_SIZE_CAP", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("size cap"));
}

#[test]
fn run_is_callable_in_process() {
    assert_eq!(ihara_cli::run(["ihara", "--version"]), 0);
    assert_eq!(ihara_cli::run(["ihara", "zeta"]), 1);
}
