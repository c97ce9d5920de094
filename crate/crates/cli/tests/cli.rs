use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_klyachko"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p: PathBuf = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn stdout_json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn diagram_output_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let i = write(
        dir.path(),
        "i.json",
        r#"{"gens":[[0,0,2],[1,0,1],[1,1,0]]}"#,
    );
    let a = run(&["diagram", "P2", &i]);
    let b = run(&["diagram", "--fan", "P2", &i]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["s"], serde_json::json!([0, 0, 0]));
    assert_eq!(v["cones"].as_object().unwrap().len(), 7);
}

#[test]
fn diagram_roundtrips_through_saturate() {
    let dir = TempDir::new().unwrap();
    let i = write(
        dir.path(),
        "i.json",
        r#"{"gens":[[0,0,2],[1,0,1],[1,1,0]]}"#,
    );
    let out = dir.path().join("d.json");
    let status = bin()
        .args(["diagram", "P2", &i, "--out", out.to_str().unwrap()])
        .status()
        .unwrap();
    assert!(status.success());
    let v = stdout_json(&run(&["saturate", "P2", out.to_str().unwrap()]));
    let mut gens: Vec<Value> = v["gens"].as_array().unwrap().clone();
    gens.sort_by_key(|g| g.to_string());
    assert_eq!(
        gens,
        vec![
            serde_json::json!([0, 0, 2]),
            serde_json::json!([1, 0, 1]),
            serde_json::json!([1, 1, 0])
        ]
    );
}

#[test]
fn saturate_projective_three_example() {
    let dir = TempDir::new().unwrap();
    let d = write(
        dir.path(),
        "d.json",
        r#"{"s":[0,0,0,0],"cones":{"[1,2,3]":{"Delta":{"cone":[1,2,3],
            "cells":[{"1":[0,0],"2":[0,0],"3":[0,null]}],"points":[[0,1,0]]}}}}"#,
    );
    let v = stdout_json(&run(&["saturate", "P3", &d]));
    let mut m: Vec<String> = v["monomials"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s.as_str().unwrap().to_string())
        .collect();
    m.sort();
    assert_eq!(m, ["x1", "x2*x3", "x2^2"]);
}

#[test]
fn hilbert_values_on_the_plane() {
    let dir = TempDir::new().unwrap();
    let i = write(
        dir.path(),
        "i.json",
        r#"{"gens":[[0,0,2],[1,0,1],[1,1,0]]}"#,
    );
    let v = stdout_json(&run(&["hilbert", "P2", &i, "--degrees", "-1..4"]));
    let vals: Vec<u64> = v["values"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x["value"].as_u64().unwrap())
        .collect();
    assert_eq!(vals, [0, 1, 3, 3, 3, 3]);
    assert_eq!(v["constant_poly"], 3);
}

#[test]
fn h1_dimensions_on_the_plane() {
    let dir = TempDir::new().unwrap();
    let i = write(
        dir.path(),
        "i.json",
        r#"{"gens":[[3,1,0],[1,1,2],[0,0,3],[0,3,0]]}"#,
    );
    let v = stdout_json(&run(&["h1", "P2", &i, "--degrees", "0..6"]));
    let dims: Vec<u64> = v["pieces"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x["dim"].as_u64().unwrap())
        .collect();
    assert_eq!(dims, [0, 1, 3, 5, 4, 1, 0]);

    let scan = stdout_json(&run(&["h1", "P2", &i]));
    assert!(scan["scanned_box"].is_array());
    let total: u64 = scan["pieces"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x["dim"].as_u64().unwrap())
        .sum();
    assert_eq!(total, 14);
}

#[test]
fn sum_matches_diagram_of_sum() {
    let dir = TempDir::new().unwrap();
    let a = write(dir.path(), "a.json", r#"{"gens":[[0,2,0]]}"#);
    let b = write(dir.path(), "b.json", r#"{"gens":[[1,0,1]]}"#);
    let both = write(dir.path(), "ab.json", r#"{"gens":[[0,2,0],[1,0,1]]}"#);
    let s = stdout_json(&run(&["sum", "P2", &a, &b]));
    let direct = stdout_json(&run(&["diagram", "P2", &both]));
    let again = write(dir.path(), "s.json", &s.to_string());
    let sat = stdout_json(&run(&["saturate", "P2", &again]));
    let sat_direct = stdout_json(&run(&["saturate", "P2", &both]));
    assert_eq!(sat["gens"], sat_direct["gens"]);
    assert_eq!(s["s"], direct["s"]);
}

#[test]
fn render_draws_four_panels() {
    let dir = TempDir::new().unwrap();
    let i = write(dir.path(), "i.json", r#"{"gens":[[0,1,0,0],[3,0,0,1]]}"#);
    let out = run(&["render", "H3", &i, "--window", "2"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.matches("cone [").count(), 4);
    let svg = run(&["render", "H3", &i, "--svg"]);
    assert!(String::from_utf8(svg.stdout).unwrap().starts_with("<svg"));
}

#[test]
fn check_passes_on_random_ideals() {
    let v = stdout_json(&run(&["check", "P1xP1", "--random", "5", "--seed", "3"]));
    assert_eq!(v["passed"], true);
    assert_eq!(v["reports"].as_array().unwrap().len(), 5);
}

#[test]
fn check_fails_on_a_wrong_diagram() {
    let dir = TempDir::new().unwrap();
    let i = write(dir.path(), "i.json", r#"{"gens":[[0,1,0],[0,0,1]]}"#);
    let d = write(
        dir.path(),
        "d.json",
        r#"{"s":[0,0,0],"cones":{"[1,2]":{"Delta":{"cone":[1,2],"points":[[0,0],[1,0]]}}}}"#,
    );
    let out = run(&["check", "P2", &i, "--diagram", &d]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn input_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    let bad = write(dir.path(), "bad.json", "{\"gens\": [[1,0");
    assert_eq!(run(&["diagram", "P2", &bad]).status.code(), Some(2));
    let wrong = write(dir.path(), "w.json", r#"{"gens":[[1,0]]}"#);
    assert_eq!(run(&["diagram", "P2", &wrong]).status.code(), Some(2));
    let zero = write(dir.path(), "z.json", r#"{"gens":[]}"#);
    assert_eq!(run(&["diagram", "P2", &zero]).status.code(), Some(2));
    let ok = write(dir.path(), "ok.json", r#"{"gens":[[1,0,0]]}"#);
    assert_eq!(run(&["diagram", "nowhere", &ok]).status.code(), Some(2));
    assert_eq!(
        run(&["hilbert", "P2", &ok, "--degrees", "0..1,0..1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
}

#[test]
fn small_box_exits_three() {
    let dir = TempDir::new().unwrap();
    let i = write(dir.path(), "i.json", r#"{"gens":[[0,1,0,0],[3,0,0,1]]}"#);
    assert_eq!(
        run(&["saturate", "H3", &i, "--box", "0..4,0..4"])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn fan_from_file() {
    let dir = TempDir::new().unwrap();
    let fan = write(
        dir.path(),
        "fan.json",
        r#"{"dim":2,"rays":[[-1,-1],[1,0],[0,1]],"max_cones":[[1,2],[0,2],[0,1]]}"#,
    );
    let i = write(
        dir.path(),
        "i.json",
        r#"{"gens":[[0,0,2],[1,0,1],[1,1,0]]}"#,
    );
    assert_eq!(
        run(&["diagram", &fan, &i]).stdout,
        run(&["diagram", "P2", &i]).stdout
    );
    let broken = write(
        dir.path(),
        "broken.json",
        r#"{"dim":2,"rays":[[2,0],[0,1]],"max_cones":[[0,1]]}"#,
    );
    assert_eq!(run(&["diagram", &broken, &i]).status.code(), Some(2));
}

#[test]
fn diagram_of_the_plane_example() {
    let dir = TempDir::new().unwrap();
    let i = write(
        dir.path(),
        "ex1.json",
        r#"{"gens":[[0,0,2],[1,0,1],[1,1,0]]}"#,
    );
    let out = run(&["diagram", "P2", &i]);
    assert!(out.status.success());
    let fan = klyachko::Fan::catalog("P2").unwrap();
    let d = klyachko::KlyachkoDiagram::from_json_str(&fan, &String::from_utf8(out.stdout).unwrap())
        .unwrap();
    let pts = d.entry_for(&[0, 2]).unwrap().delta.enumerate().unwrap();
    let want = [
        klyachko::Character(vec![-1, 1]),
        klyachko::Character(vec![0, 0]),
    ];
    assert_eq!(pts, want);
}

#[test]
fn render_flag_marks_the_origin() {
    let dir = TempDir::new().unwrap();
    let i = write(dir.path(), "hirz.json", r#"{"gens":[[0,1,0,0],[3,0,0,1]]}"#);
    let svg = dir.path().join("h.svg");
    let out = run(&[
        "diagram",
        "H3",
        &i,
        "--render",
        "--svg",
        svg.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let panels = &text[text.find("cone [").unwrap()..];
    assert_eq!(panels.matches("cone [").count(), 4);
    assert_eq!(panels.matches('x').count(), 1);
    let first = panels.split("\n\n").next().unwrap();
    assert!(first.starts_with("cone [1, 3]"));
    let origin = first.lines().find(|l| l.starts_with("   0 |")).unwrap();
    let cols: Vec<&str> = origin[7..].split(' ').collect();
    assert_eq!(cols[cols.len() / 2], "x");
    assert!(fs::read_to_string(svg).unwrap().starts_with("<svg"));
}

#[test]
fn check_passes_on_the_worked_examples() {
    let dir = TempDir::new().unwrap();
    for (fan, gens) in [
        ("P2", "[[0,0,2],[1,0,1],[1,1,0]]"),
        ("P2", "[[3,1,0],[1,1,2],[0,0,3],[0,3,0]]"),
        ("P3", "[[1,1,0,0],[0,1,1,2],[0,0,2,0]]"),
        ("P3", "[[0,1,0,0],[0,0,2,0],[0,0,1,1]]"),
        ("H3", "[[0,1,0,0],[3,0,0,1]]"),
    ] {
        let i = write(dir.path(), "i.json", &format!(r#"{{"gens":{gens}}}"#));
        let v = stdout_json(&run(&["check", fan, &i]));
        assert_eq!(v["passed"], true, "{fan} {gens}");
    }
}
