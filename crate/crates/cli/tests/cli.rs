//! Runs the binary on bundled and local inputs and diffs against golden
//! files. Set `UPDATE_GOLDEN=1` to rewrite the goldens.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fanotope"))
}

fn tests_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests")
}

fn data(name: &str) -> String {
    tests_dir().join("data").join(name).display().to_string()
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn golden(name: &str, args: &[&str], code: i32) {
    let o = run(args);
    assert_eq!(o.status.code(), Some(code), "{args:?}: {}", stderr(&o));
    let path = tests_dir().join("golden").join(name);
    let got = stdout(&o);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        fs::write(&path, &got).unwrap();
        return;
    }
    let want = fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(got, want, "output of {args:?} differs from {name}");
}

#[test]
fn golden_polygon() {
    golden("polygon-hexagon.json", &["polygon", "--fixture", "paper-P"], 0);
    golden("polygon-hexagon.txt", &["polygon", "--fixture", "paper-P", "--format", "text"], 0);
}

#[test]
fn golden_scaffold() {
    golden("scaffold-hexagon.json", &["scaffold", "--fixture", "paper-scaffolding"], 0);
    golden(
        "scaffold-hexagon.txt",
        &["scaffold", "--fixture", "paper-scaffolding", "--check-hull", "--format", "text"],
        0,
    );
}

#[test]
fn golden_periods() {
    golden(
        "classical-symbolic.txt",
        &["periods", "classical", "--fixture", "paper-f", "--order", "3", "--symbolic", "--format", "text"],
        0,
    );
    golden(
        "classical-symbolic.json",
        &["periods", "classical", "--fixture", "paper-f", "--order", "3", "--symbolic"],
        0,
    );
    golden(
        "quantum-hexagon.txt",
        &["periods", "quantum", "--fixture", "paper", "--order", "4", "--format", "text"],
        0,
    );
    golden("compare-hexagon.json", &["periods", "compare", "--fixture", "paper", "--order", "12"], 0);
}

#[test]
fn documented_outputs() {
    let o = run(&["polygon", "--fixture", "paper-P"]);
    let text = stdout(&o);
    assert!(text.contains("\"22/15\""));
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let sings: u64 = v["result"]["singularity_multiset"]
        .as_object()
        .unwrap()
        .values()
        .map(|n| n.as_u64().unwrap())
        .sum();
    assert_eq!(sings, 6);
    assert_eq!(v["result"]["qg_dimension"], 2);
    assert_eq!(v["result"]["symmetries"].as_array().unwrap().len(), 2);

    let o = run(&["scaffold", "--fixture", "paper-scaffolding", "--format", "text"]);
    let text = stdout(&o);
    assert!(text.contains("equation: z1*z2 - y1*y2*x1^2*x2^2"));
    assert!(text.contains("charts: 8"));

    let o = run(&["periods", "compare", "--fixture", "paper", "--order", "12", "--format", "text"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("EQUAL through t^12\n"));

    let o = run(&["periods", "quantum", "--fixture", "paper", "--order", "4", "--format", "text"]);
    assert!(stdout(&o).contains("regularized: 1, 0, 16, 0, 936\n"));

    let o = run(&["periods", "classical", "--fixture", "paper-f", "--order", "3", "--symbolic", "--format", "text"]);
    let text = stdout(&o);
    assert!(text.contains("t^2: 2*a1*a2 + 2*b1*b2 + 2*c1*c2 + 14\n"));
    assert!(text.contains("t^3: 6*a1*b1 + 12*a1*c2 + 6*a2*b2 + 12*a2*c1 + 24*b1 + 24*b2 + 6*c1 + 6*c2\n"));
}

#[test]
fn smooth_square() {
    let o = run(&["polygon", "--in", &data("square.json"), "--format", "text"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("singularities: none"), "{text}");
    assert!(text.contains("polar volume: 8"), "{text}");
}

#[test]
fn classical_period_of_projective_plane() {
    let o = run(&["periods", "classical", "--in", &data("p2.json"), "--order", "6", "--format", "text"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("coefficients: 1, 0, 0, 6, 0, 0, 90\n"));
}

#[test]
fn exit_codes() {
    let cases: [(&[&str], i32, &str); 8] = [
        (&["polygon", "--in", &data("bad.json")], 3, "not primitive"),
        (&["polygon", "--in", &data("malformed.json")], 2, "invalid polygon JSON"),
        (&["polygon", "--in", &data("does-not-exist.json")], 2, "cannot read"),
        (&["polygon", "--fixture", "nope"], 2, "unknown fixture"),
        (&["scaffold", "--in", &data("missing-strut.json")], 2, "struts"),
        (&["periods", "classical", "--fixture", "paper-f", "--symbolic", "--order", "7"], 2, "limited to order 6"),
        (&["periods", "classical", "--in", &data("p2.json"), "--assign", "a1=="], 2, "--assign"),
        (&["polygon", "--fixture", "paper", "--bogus"], 2, ""),
    ];
    for (args, code, msg) in cases {
        let o = run(args);
        assert_eq!(o.status.code(), Some(code), "{args:?}: {}", stderr(&o));
        assert!(stderr(&o).contains(msg), "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn mismatch_exit_code() {
    let o = run(&["periods", "compare", "--fixture", "paper", "--order", "6", "--assign", "a1=2", "--format", "text"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stdout(&o).starts_with("MISMATCH at t^2: regularized quantum 16 vs classical 18\n"));

    let o = run(&["periods", "compare", "--fixture", "paper", "--order", "6", "--assign", "a1=2"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["result"]["verdict"], serde_json::json!({"result": "first_mismatch", "order": 2}));
}

#[test]
fn deterministic_and_round_trips() {
    let args = ["scaffold", "--fixture", "paper-scaffolding"];
    let a = stdout(&run(&args));
    let b = stdout(&run(&args));
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    let again: serde_json::Value = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
    assert_eq!(again, v);
    assert!(v.get("timing_ms").is_none());

    let o = run(&["polygon", "--fixture", "paper", "--timing"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["timing_ms"].is_u64());
}

#[test]
fn writes_to_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let o = run(&["polygon", "--fixture", "paper-P", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let written = fs::read_to_string(&path).unwrap();
    assert_eq!(written, stdout(&run(&["polygon", "--fixture", "paper-P"])));
}

#[test]
fn file_input_hash_matches_fixture_hash() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.json");
    fs::write(&path, fanotope::fixtures::HEXAGON_P).unwrap();
    let from_file: serde_json::Value =
        serde_json::from_str(&stdout(&run(&["polygon", "--in", path.to_str().unwrap()]))).unwrap();
    let from_fixture: serde_json::Value = serde_json::from_str(&stdout(&run(&["polygon", "--fixture", "paper-P"]))).unwrap();
    assert_eq!(from_file["inputs"][0]["sha256"], from_fixture["inputs"][0]["sha256"]);
    assert_eq!(from_file["result"], from_fixture["result"]);
}
