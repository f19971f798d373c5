use std::path::Path;
use std::process::Command;

use onesided::chains::complete_family;
use onesided::cli::run_with;
use onesided::geometry::ratio;
use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("onesided").chain(args.iter().copied());
    let code = run_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn json_file(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn generate_then_approximate() {
    let dir = tempfile::tempdir().unwrap();
    let pts = dir.path().join("p.json");
    let approx = dir.path().join("a.json");
    let trace = dir.path().join("trace.json");
    let (code, _, err) = run(&["generate", "--kind", "moment", "--n", "9", "--d", "2", "-o", p(&pts)]);
    assert_eq!(code, 0, "{err}");
    let (code, _, err) = run(&[
        "approximate", "--input", p(&pts), "--epsilon", "1/2", "--mode", "empirical",
        "--t", "8", "--u", "1", "-o", p(&approx), "--trace", p(&trace),
    ]);
    assert_eq!(code, 0, "{err}");
    let a = json_file(&approx);
    let total: u64 = match a.get("multiplicities").and_then(Value::as_array) {
        Some(m) => m.iter().map(|x| x.as_u64().unwrap()).sum(),
        None => a["points"].as_array().unwrap().len() as u64,
    };
    assert!(total > 0);
    let t = json_file(&trace);
    for key in ["params", "M", "m", "discarded"] {
        assert!(t.get(key).is_some(), "trace lacks {key}");
    }
    for key in ["s", "D", "t", "u", "n0"] {
        assert!(t["params"].get(key).is_some(), "params lack {key}");
    }
}

#[test]
fn discrepancy_of_identity_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let pts = dir.path().join("p.json");
    run(&["generate", "--kind", "circle", "--n", "10", "--d", "2", "-o", p(&pts)]);
    for mode in ["one", "two"] {
        let (code, out, err) = run(&["discrepancy", "--p", p(&pts), "--a", p(&pts), "--mode", mode, "--exact"]);
        assert_eq!(code, 0, "{err}");
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["value"], "0/1");
        assert_eq!(v["exact"], true);
    }
}

#[test]
fn exhaustive_verify_over_cap_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let fam = dir.path().join("family.txt");
    std::fs::write(&fam, complete_family(3, 30, ratio(1, 2)).unwrap().to_text()).unwrap();
    let (code, _, _) = run(&["chains", "verify", "--family", p(&fam), "--mode", "exhaustive"]);
    assert_eq!(code, 2);
}

#[test]
fn chains_build_and_sampled_verify() {
    let dir = tempfile::tempdir().unwrap();
    let fam = dir.path().join("family.txt");
    let (code, _, err) = run(&["chains", "build", "--D", "3", "--epsilon", "1/2", "-o", p(&fam)]);
    assert_eq!(code, 0, "{err}");
    let (code, out, err) = run(&[
        "chains", "verify", "--family", p(&fam), "--samples", "300", "--restarts", "3",
    ]);
    assert_eq!(code, 0, "{err}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["verified"], true);
    assert_eq!(v["t"], 256);
}

#[test]
fn strict_guarantee_is_infeasible() {
    let dir = tempfile::tempdir().unwrap();
    let pts = dir.path().join("p.json");
    run(&["generate", "--kind", "moment", "--n", "12", "--d", "2", "-o", p(&pts)]);
    let (code, out, _) = run(&[
        "approximate", "--input", p(&pts), "--epsilon", "1/2", "--mode", "guarantee", "--strict",
    ]);
    assert_eq!(code, 3);
    let report: Value = serde_json::from_str(&out).unwrap();
    assert!(report.get("params").is_some());
}

#[test]
fn invalid_input_exits_1() {
    assert_eq!(run(&["frobnicate"]).0, 1);
    assert_eq!(run(&["chains", "build", "--D", "3", "--epsilon", "0.5"]).0, 1);
    assert_eq!(run(&["chains", "build", "--D", "3", "--epsilon", "3/2"]).0, 1);
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"dim": 2, "points": [[1, 2], [3]]}"#).unwrap();
    assert_eq!(run(&["discrepancy", "--p", p(&bad), "--a", p(&bad)]).0, 1);
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn partition_and_prop12() {
    let dir = tempfile::tempdir().unwrap();
    let pts = dir.path().join("p.json");
    let parts = dir.path().join("parts.txt");
    let a = dir.path().join("a.json");
    run(&["generate", "--kind", "moment", "--n", "9", "--d", "2", "-o", p(&pts)]);
    std::fs::write(&parts, "0: 0 1 2\n1: 3 4 5\n2: 6 7 8\n").unwrap();
    let (code, out, err) = run(&["partition", "check", "--input", p(&pts), "--parts", p(&parts), "--gamma", "1/2"]);
    assert_eq!(code, 0, "{err}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["status"], "accepted");

    let circle = dir.path().join("c.json");
    run(&["generate", "--kind", "circle", "--n", "12", "--d", "2", "-o", p(&circle)]);
    std::fs::write(&a, r#"{"dim": 2, "points": [["1/10", "0"]], "multiplicities": [1]}"#).unwrap();
    let (code, out, err) = run(&["prop12", "--input", p(&circle), "--a", p(&a), "--epsilon", "1/10"]);
    assert_eq!(code, 0, "{err}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert!(v.get("gap").is_some());
}

#[test]
fn binary_output_is_deterministic() {
    let bin = env!("CARGO_BIN_EXE_onesided");
    let dir = tempfile::tempdir().unwrap();
    let pts = dir.path().join("p.json");
    let st = Command::new(bin)
        .args(["generate", "--kind", "random", "--n", "14", "--d", "2", "--seed", "7", "-o", p(&pts)])
        .status()
        .unwrap();
    assert!(st.success());
    let once = || {
        let o = Command::new(bin)
            .args(["generate", "--kind", "random", "--n", "14", "--d", "2", "--seed", "7"])
            .output()
            .unwrap();
        let a = Command::new(bin)
            .args([
                "approximate", "--input", p(&pts), "--epsilon", "1/2", "--t", "6", "--u", "1", "--seed", "3",
            ])
            .output()
            .unwrap();
        let d = Command::new(bin)
            .args(["discrepancy", "--p", p(&pts), "--a", p(&pts), "--samples", "40", "--seed", "5"])
            .output()
            .unwrap();
        assert!(a.status.success() && d.status.success());
        (o.stdout, a.stdout, d.stdout)
    };
    let first = once();
    assert_eq!(first.0, std::fs::read(&pts).unwrap());
    assert_eq!(first, once());
}
