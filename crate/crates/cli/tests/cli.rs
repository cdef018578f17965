use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_amplituhedron"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

fn matrix(entries: &[&[i64]]) -> Value {
    let rows: Vec<Vec<String>> = entries.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
    json!({"rows": rows.len(), "cols": rows[0].len(), "entries": rows})
}

/// n=3, k=1, m=2 with 𝒵 rows (1, t, t²) at t = 1, 2, 3.
fn triangle(y: &[i64]) -> String {
    json!({"n": 3, "k": 1, "m": 2, "Z": matrix(&[&[1, 1, 1], &[1, 2, 4], &[1, 3, 9]]), "Y": matrix(&[y])}).to_string()
}

#[test]
fn triangle_winds_once() {
    let dir = tempfile::tempdir().unwrap();
    // 𝒵_1 + 𝒵_2 + 𝒵_3
    let f = write(dir.path(), "t.json", &triangle(&[3, 6, 14]));
    for mode in ["random", "mu"] {
        let out = run(&["winding", &f, "--mode", mode]);
        assert!(out.status.success());
        let v: Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(v["magnitude"], 1, "{mode}");
    }
    let out = run(&["membership", &f]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["verdict"], "inside");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", "{\"n\": 3,");
    assert_eq!(run(&["crossing", &bad]).status.code(), Some(2));

    let swapped = json!({"n": 3, "k": 1, "m": 2, "Z": matrix(&[&[1, 2, 4], &[1, 1, 1], &[1, 3, 9]]), "Y": matrix(&[&[3, 6, 14]])});
    let f = write(dir.path(), "neg.json", &swapped.to_string());
    assert_eq!(run(&["twistor", &f]).status.code(), Some(3));

    // 𝒵_1 + 𝒵_2 lies on ⟨Y,1,2⟩ = 0
    let f = write(dir.path(), "edge.json", &triangle(&[2, 3, 5]));
    let out = run(&["winding", &f]);
    assert_eq!(out.status.code(), Some(4));
    assert!(!out.stderr.is_empty());

    assert_eq!(run(&["sample", "--n", "15", "--k", "1", "--m", "2"]).status.code(), Some(1));
    let out = run(&["sample", "--n", "15", "--k", "1", "--m", "2", "--allow-large-n"]);
    assert!(out.status.success());
}

#[test]
fn sample_is_deterministic_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let a = run(&["sample", "--n", "6", "--k", "2", "--m", "2", "--seed", "9"]);
    let b = run(&["sample", "--n", "6", "--k", "2", "--m", "2", "--seed", "9"]);
    assert_eq!(a.stdout, b.stdout);

    let out = dir.path().join("s.json");
    let o = out.to_str().unwrap();
    assert!(run(&["sample", "--n", "6", "--k", "2", "--m", "2", "--seed", "9", "--out", o]).status.success());
    assert_eq!(std::fs::read(&out).unwrap(), a.stdout);
    let ctx = amplituhedron::io::parse_context(std::str::from_utf8(&a.stdout).unwrap()).unwrap();
    assert_eq!(amplituhedron::io::context_to_json(&ctx) + "\n", String::from_utf8(a.stdout).unwrap());
}

#[test]
fn twistor_csv_rows() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "t.json", &triangle(&[3, 6, 14]));
    let out = run(&["twistor", &f]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "window,value,sign");
    assert_eq!(lines.len(), 4);
    for l in &lines[1..] {
        let sign: i32 = l.rsplit(',').next().unwrap().parse().unwrap();
        assert_ne!(sign, 0, "{l}");
    }
}

#[test]
fn crossing_and_unproven_membership() {
    let dir = tempfile::tempdir().unwrap();
    let s = run(&["sample", "--n", "6", "--k", "2", "--m", "3", "--seed", "1"]);
    let f = write(dir.path(), "c.json", std::str::from_utf8(&s.stdout).unwrap());
    let c: Value = serde_json::from_slice(&run(&["crossing", &f]).stdout).unwrap();
    let v: Value = serde_json::from_slice(&run(&["membership", &f]).stdout).unwrap();
    assert_eq!(v["verdict"], "unproven");
    assert_eq!(v["value"], v["formula"]);
    assert_eq!(c["count"], v["formula"]);
    assert_eq!(amplituhedron::crossing_formula(2, 3).unwrap(), v["formula"].as_u64().unwrap());
}

#[test]
fn render_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let s = run(&["sample", "--n", "7", "--k", "2", "--m", "2", "--seed", "4"]);
    let f = write(dir.path(), "r.json", std::str::from_utf8(&s.stdout).unwrap());
    let a = dir.path().join("a.svg");
    let b = dir.path().join("b.svg");
    assert!(run(&["render", &f, "--out", a.to_str().unwrap()]).status.success());
    assert!(run(&["render", &f, "--out", b.to_str().unwrap()]).status.success());
    let svg = std::fs::read_to_string(&a).unwrap();
    assert_eq!(svg, std::fs::read_to_string(&b).unwrap());
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    assert_eq!(svg.matches("<line").count(), 7);
}

#[test]
fn verify_small_grid() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let o = run(&["verify", "--grid", "m=2;k=1-2;dn=0-1", "--seeds", "2", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["summary"]["total"], 8);
    assert_eq!(v["summary"]["failed"], 0);
    assert_eq!(run(&["verify", "--grid", "m=;k", "--seeds", "1"]).status.code(), Some(2));
}
