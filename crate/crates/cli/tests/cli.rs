use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(format!("{name}.json"))
}

fn koszul(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_koszul")).args(args).output().unwrap()
}

fn on_fixture(cmd: &str, name: &str, extra: &[&str]) -> (i32, String, String) {
    let path = fixture(name);
    let mut args = vec![cmd, "--input", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    let out = koszul(&args);
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn check_passes_on_koszul_fixtures() {
    for name in ["polynomial2", "polynomial3", "exterior1", "exterior2", "free2"] {
        let (code, out, _) = on_fixture("check", name, &[]);
        assert_eq!(code, 0, "{name}");
        let r = json(&out);
        assert_eq!(r["verdicts"]["koszul"], true, "{name}");
        assert_eq!(r["exactness_table"].as_object().unwrap().len(), 6);
    }
}

#[test]
fn report_has_the_fixed_top_level_keys() {
    let (_, out, _) = on_fixture("check", "polynomial3", &[]);
    let r = json(&out);
    let keys: Vec<&str> = r.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["dims", "exactness_table", "input_digest", "schema_version", "timings", "verdicts"]);
    assert_eq!(r["dims"]["coring"], json("[1, 3, 3, 1, 0, 0]"));
    assert_eq!(r["input_digest"].as_str().unwrap().len(), 64);
}

#[test]
fn truncated_coring_exits_with_one() {
    let (code, out, _) = on_fixture("check", "polynomial2", &["--coring-truncate", "1"]);
    assert_eq!(code, 1);
    assert_eq!(json(&out)["verdicts"]["witness_degree"], 2);
}

#[test]
fn malformed_word_reports_line_and_column() {
    let (code, out, err) = on_fixture("check", "bad_word_length", &[]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("line 5, column"), "{err}");
    assert!(err.contains("exactly two"), "{err}");
}

#[test]
fn missing_input_and_bad_field_are_input_errors() {
    assert_eq!(koszul(&["check"]).status.code(), Some(2));
    let (code, _, err) = on_fixture("check", "polynomial2", &["--field", "gf4"]);
    assert_eq!(code, 2, "{err}");
    assert_eq!(koszul(&["check", "--input", "/nonexistent.json"]).status.code(), Some(2));
}

#[test]
fn field_override_changes_the_report() {
    let (code, out, _) = on_fixture("check", "polynomial2", &["--field", "gf7"]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["verdicts"]["field"], "gf7");
}

#[test]
fn twist_fixtures() {
    for name in ["quantum_q2_rational", "quantum_q3_gf5", "flip_twist", "family_diagonal"] {
        let (code, out, err) = on_fixture("twist", name, &[]);
        assert_eq!(code, 0, "{name}: {err}");
        let r = json(&out);
        assert_eq!(r["verdicts"]["factorization"], true, "{name}");
        assert_eq!(r["verdicts"]["dual_matches_tor"], true, "{name}");
        assert_eq!(r["dims"]["twisted_tor_diagonal"], r["dims"]["twisted_coring"], "{name}");
    }
    let (_, out, _) = on_fixture("twist", "quantum_q2_rational", &[]);
    assert_eq!(json(&out)["dims"]["twisted_algebra"], json("[1, 2, 3, 4, 5, 6]"));
}

#[test]
fn twist_failures_exit_with_one() {
    let (code, out, _) = on_fixture("twist", "descent_failure", &[]);
    assert_eq!(code, 1);
    let r = json(&out);
    assert_eq!(r["verdicts"]["descent"], false);
    assert!(r["verdicts"]["error"].as_str().unwrap().contains("x⊗x"));

    let (code, out, _) = on_fixture("twist", "noninvertible_sigma", &[]);
    assert_eq!(code, 1);
    assert!(json(&out)["verdicts"]["error"].as_str().unwrap().contains("not invertible"));

    let (code, out, _) = on_fixture("twist", "sigma2_violation", &[]);
    assert_eq!(code, 1);
    assert!(json(&out)["verdicts"]["error"].as_str().unwrap().contains("sigma2"));
}

#[test]
fn twist_without_a_twist_block_is_an_input_error() {
    let (code, _, err) = on_fixture("twist", "polynomial2", &[]);
    assert_eq!(code, 2);
    assert!(err.contains("twist"));
}

#[test]
fn dual_and_hilbert() {
    let (code, out, _) = on_fixture("dual", "exterior2", &["--max-degree", "4"]);
    assert_eq!(code, 0);
    let r = json(&out);
    assert_eq!(r["dims"]["tor_diagonal"], json("[1, 2, 3, 4, 5]"));
    assert_eq!(r["verdicts"]["tor = C dims"], true);

    let (code, out, _) = on_fixture("hilbert", "polynomial2", &[]);
    assert_eq!(code, 0);
    let r = json(&out);
    assert_eq!(r["verdicts"]["coring_series"], "1 + 2t + t^2");
    assert_eq!(r["verdicts"]["convolution_vanishes"], true);
}

#[test]
fn seeded_runs_are_reproducible() {
    for cmd in ["check", "twist", "hilbert"] {
        let a = koszul(&[cmd, "--seed", "11"]);
        let b = koszul(&[cmd, "--seed", "11"]);
        assert!(a.status.code().unwrap() <= 1, "{cmd}");
        assert_eq!(a.stdout, b.stdout, "{cmd}");
    }
    let twist = json(&String::from_utf8(koszul(&["twist", "--seed", "11"]).stdout).unwrap());
    assert_eq!(twist["verdicts"]["prekoszul"], true);
}

#[test]
fn text_report() {
    let (code, out, _) = on_fixture("check", "free2", &["--report", "text"]);
    assert_eq!(code, 0);
    assert!(out.contains("coring: [1, 2, 0, 0, 0, 0]"));
    assert!(out.contains("bimodule         ++++++"));
}
