use std::path::PathBuf;

use assert_cmd::Command;
use serde_json::Value;

fn bin() -> Command {
    let mut cmd = Command::cargo_bin("rootcount").unwrap();
    cmd.env_remove("ROOTCOUNT_TOL");
    cmd
}

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(args: &[&str]) -> Run {
    let out = bin().args(args).output().unwrap();
    Run {
        code: out.status.code().unwrap(),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn schema(name: &str) -> jsonschema::Validator {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../schemas")
        .join(format!("{name}.schema.json"));
    let raw: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&raw).unwrap()
}

fn json_valid(name: &str, args: &[&str]) -> (i32, Value) {
    let r = run(args);
    let v: Value = serde_json::from_str(&r.stdout).unwrap_or_else(|e| panic!("{e}: {}", r.stdout));
    let validator = schema(name);
    let errors: Vec<String> = validator.iter_errors(&v).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{name}: {errors:#?}");
    (r.code, v)
}

#[test]
fn quadratic_recurrence_table() {
    let r = run(&["root", "2x^2+2x-1", "--iters", "9"]);
    assert_eq!(r.code, 3, "a fixed row budget ends unconverged");
    for cell in ["-16", "12", "2448", "-1792", "-1.3660714286"] {
        assert!(r.stdout.contains(cell), "{cell}\n{}", r.stdout);
    }
    assert!(r.stdout.contains("estimate: -153/112"));
}

#[test]
fn quadratic_converges_by_default() {
    let r = run(&["root", "2x^2+2x-1"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("status: converged"));
    assert!(r.stdout.contains("-1.3660254038"));
}

#[test]
fn explicit_words() {
    let r = run(&[
        "root",
        "2x^2+2x-1",
        "--engine",
        "rewrite",
        "--mode",
        "explicit",
        "--iters",
        "4",
    ]);
    assert!(r.stdout.contains("0~0~11"));
    assert!(r.stdout.contains("001~1~001~1~00"));
}

#[test]
fn counts_mode_matches_recurrence() {
    let a = run(&[
        "root",
        "2x^2+2x-1",
        "--engine",
        "rewrite",
        "--mode",
        "counts",
        "--format",
        "json",
    ]);
    let b = run(&["root", "2x^2+2x-1", "--format", "json"]);
    let (a, b): (Value, Value) = (
        serde_json::from_str(&a.stdout).unwrap(),
        serde_json::from_str(&b.stdout).unwrap(),
    );
    assert_eq!(a["result"]["estimate"], b["result"]["estimate"]);
}

#[test]
fn cube_root_oscillates_with_hint() {
    let r = run(&["root", "x^3-2"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("--alpha"), "{}", r.stderr);
    let shifted = run(&["root", "x^3-2", "--alpha", "1", "--beta", "1"]);
    assert_eq!(shifted.code, 0);
    assert!(shifted.stdout.contains("1.25992104"));
}

#[test]
fn roots_of_quadratic() {
    let (code, v) = json_valid("roots", &["roots", "2x^2+2x-1", "--alpha-max", "3"]);
    assert_eq!(code, 0);
    let values: Vec<f64> = v["roots"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["value"].as_f64().unwrap())
        .collect();
    let expected = [-(1.0 + 3f64.sqrt()) / 2.0, (3f64.sqrt() - 1.0) / 2.0];
    assert_eq!(values.len(), 2);
    for (x, y) in values.iter().zip(expected) {
        assert!((x - y).abs() < 1e-9, "{x} vs {y}");
    }
}

#[test]
fn roots_of_cube_root_of_two() {
    let r = run(&["roots", "x^3-2", "--alpha-max", "2", "--format", "table"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("1.2599210499"));
}

#[test]
fn no_real_roots() {
    let (code, v) = json_valid("roots", &["roots", "x^2+1"]);
    assert_eq!(code, 4);
    assert!(v["roots"].as_array().unwrap().is_empty());
}

#[test]
fn certified_roots_validate() {
    let (code, v) = json_valid("roots", &["roots", "x^2-1", "--certify"]);
    assert_eq!(code, 0);
    let accepted = v["candidates"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["accepted"] == true)
        .count();
    assert_eq!(v["certificates"].as_array().unwrap().len(), accepted);
}

#[test]
fn root_json_validates() {
    let (code, v) = json_valid(
        "root",
        &["root", "2x^2+2x-1", "--format", "json", "--verify"],
    );
    assert_eq!(code, 0);
    assert_eq!(v["result"]["status"], "converged");
    assert!(v["oracle"]["error"].as_f64().unwrap() < 1e-9);
    json_valid("root", &["root", "x^3-2", "--format", "json"]);
    json_valid("root", &["root", "3x-2", "--format", "json"]);
    json_valid(
        "root",
        &[
            "root", "x^2-x-1", "--engine", "rewrite", "--mode", "explicit", "--iters", "6",
            "--format", "json",
        ],
    );
}

#[test]
fn table_json_and_csv() {
    let (code, v) = json_valid(
        "table",
        &[
            "table", "x^3-2", "--alpha", "1", "--beta", "1", "--format", "json",
        ],
    );
    assert_eq!(code, 0);
    assert_eq!(v["rows"].as_array().unwrap().len(), 10);
    let r = run(&[
        "table", "x^3-2", "--alpha", "1", "--beta", "1", "--rows", "5", "--format", "csv",
    ]);
    assert_eq!(r.stdout.lines().next(), Some("j,S(1),S(2),S(3),estimate"));
    assert_eq!(r.stdout.lines().count(), 6);
}

#[test]
fn trace_prints_words() {
    let r = run(&["trace", "2x^2+2x-1", "--steps", "2", "--counts"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.stdout, "0\t1\t0\n0~0~11\t-2\t2\n001~1~001~1~00\t6\t-4\n");
}

#[test]
fn delian_counts_and_svg() {
    let (code, v) = json_valid(
        "delian",
        &["delian", "--iterations", "5", "--format", "json"],
    );
    assert_eq!(code, 0);
    assert_eq!(v["counts"]["blue"], "21");
    assert_eq!(v["counts"]["green"], "15");
    assert_eq!(v["counts"]["red"], "12");
    assert_eq!(v["construction"]["de"]["rational"], "5/4");

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("d.svg");
    let r = run(&[
        "delian",
        "--iterations",
        "60",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(r.code, 0);
    let svg = std::fs::read_to_string(&out).unwrap();
    assert!(svg.starts_with("<?xml") || svg.starts_with("<svg"));
    assert!(svg.contains("id=\"de\""));
    assert!(r.stdout.contains("1.2599210499"));
}

#[test]
fn delian_without_reds() {
    let (code, v) = json_valid(
        "delian",
        &["delian", "--iterations", "0", "--format", "json"],
    );
    assert_eq!(code, 0);
    assert!(v["construction"].is_null());
    let r = run(&["delian", "--iterations", "0", "--format", "svg"]);
    assert!(r.stdout.contains("<svg"));
}

#[test]
fn verify_reports_ok() {
    let (code, v) = json_valid("verify", &["verify", "x^3-2", "--format", "json"]);
    assert_eq!(code, 0);
    assert_eq!(v["ok"], true);
    assert_eq!(v["dominance"], "tied");
    let (code, _) = json_valid("verify", &["verify", "2x^2+2x-1", "--format", "json"]);
    assert_eq!(code, 0);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(run(&["root", "x^2+"]).code, 1);
    assert_eq!(
        run(&["root", "x^2-2", "--seed", "1,0", "--start", "0"]).code,
        1
    );
    assert_eq!(run(&["root"]).code, 1);
    assert_eq!(run(&["frobnicate"]).code, 1);
    assert_eq!(run(&["delian", "--theta", "200"]).code, 1);
    assert_eq!(run(&["--help"]).code, 0);
}

#[test]
fn tolerance_from_environment() {
    let loose = bin()
        .env("ROOTCOUNT_TOL", "1e-3")
        .args(["root", "2x^2+2x-1"])
        .output()
        .unwrap();
    let tight = run(&["root", "2x^2+2x-1"]);
    let loose = String::from_utf8(loose.stdout).unwrap();
    assert!(loose.lines().count() < tight.stdout.lines().count());
    // the flag wins over the environment
    let flag = bin()
        .env("ROOTCOUNT_TOL", "1e-3")
        .args(["root", "2x^2+2x-1", "--tol", "1e-12"])
        .output()
        .unwrap();
    assert_eq!(String::from_utf8(flag.stdout).unwrap(), tight.stdout);
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["roots", "x^3-3x+1", "--alpha-max", "3"][..],
        &["delian", "--iterations", "8", "--format", "svg"][..],
        &["verify", "x^2-x-1"][..],
    ] {
        let a = run(args);
        let b = run(args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}
