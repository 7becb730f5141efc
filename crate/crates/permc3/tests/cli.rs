//! End-to-end CLI checks: verdicts map to exit codes and the JSON
//! certificates carry reproducible evidence.

use std::io::Write;
use std::process::{Command, Stdio};

use serde_json::Value;

fn run_cli(args: &[&str], stdin: Option<&str>) -> (Value, i32) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_permc3"));
    cmd.args(args).stdout(Stdio::piped()).stderr(Stdio::piped());
    if stdin.is_some() {
        cmd.stdin(Stdio::piped());
    }
    let mut child = cmd.spawn().expect("spawn permc3");
    if let Some(text) = stdin {
        child.stdin.as_mut().unwrap().write_all(text.as_bytes()).unwrap();
    }
    let out = child.wait_with_output().expect("wait");
    let code = out.status.code().unwrap_or(-1);
    let stdout = String::from_utf8(out.stdout).expect("utf8");
    let json = if stdout.trim().is_empty() {
        Value::Null
    } else {
        serde_json::from_str(&stdout).expect("stdout is one JSON document")
    };
    (json, code)
}

#[test]
fn uk3_certificate_and_exit_zero() {
    let (json, code) = run_cli(&["uk", "3"], None);
    assert_eq!(code, 0);
    assert_eq!(json["verdict"], Value::Bool(true));
    assert_eq!(json["evidence"]["certificate"]["in_c3"], Value::Bool(true));
    assert_eq!(json["evidence"]["certificate"]["inverse_refuted_at"], 3);
    assert_eq!(json["schema"], "permc3.cert.v1");
}

#[test]
fn classify_pi_prime_exits_one_with_witness() {
    let (json, code) = run_cli(&["classify", "--circuit", "-"], Some("TOF 1 2 3\nTOF 3 4 5\n"));
    assert_eq!(code, 1);
    assert_eq!(json["verdict"], Value::Bool(false));
    assert_eq!(json["evidence"]["in_c3"], Value::Bool(false));
    assert_eq!(json["evidence"]["witness"], "X1");
}

#[test]
fn poly_coordinates_match_spec_example() {
    let (json, code) = run_cli(&["poly", "--circuit", "-"], Some("TOF 1 2 3\n"));
    assert_eq!(code, 0);
    let coords: Vec<&str> = json["evidence"]["coordinates"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap())
        .collect();
    assert_eq!(coords, vec!["a1", "a2", "a3 + a1*a2"]);
}

#[test]
fn malformed_circuit_exits_two() {
    let (_, code) = run_cli(&["poly", "--circuit", "-"], Some("TOF 1 1 3\n"));
    assert_eq!(code, 2);
    let (_, code) = run_cli(&["mult", "--circuit", "-"], Some("H 1\n"));
    assert_eq!(code, 2);
}

#[test]
fn survey_small_and_witness() {
    let (json, code) = run_cli(&["survey", "-n", "4", "--shards", "2"], None);
    assert_eq!(code, 0);
    assert_eq!(json["evidence"]["total"], 16);
    assert_eq!(json["evidence"]["non_sc_c3"], 0);

    let (json, code) = run_cli(&["witness"], None);
    assert_eq!(code, 0);
    assert_eq!(json["evidence"]["in_c3"], Value::Bool(true));
    assert_eq!(json["evidence"]["semi_clifford"], Value::Bool(false));
    assert_eq!(json["evidence"]["inverse_refuted_at"], 3);
}

#[test]
fn survey_n7_requires_sample() {
    let (_, code) = run_cli(&["survey", "-n", "7"], None);
    assert_eq!(code, 2);
    let (json, code) = run_cli(&["survey", "-n", "7", "--sample", "200", "--seed", "5"], None);
    assert_eq!(code, 0);
    assert_eq!(json["evidence"]["sampled"], 200);
}

#[test]
fn mult_roundtrip_through_table_text() {
    // Circuit -> table text -> circuit: the emitted table must parse back
    // to the same verdict and circuit.
    let (json, code) = run_cli(&["mult", "--circuit", "-"], Some("TOF 1 2 3\nTOF 1 2 4\n"));
    assert_eq!(code, 0);
    let table_text = json["evidence"]["table"].as_str().unwrap().to_string();
    let circuit = json["evidence"]["circuit"].as_str().unwrap().to_string();
    assert_eq!(circuit, "TOF 1 2 3\nTOF 1 2 4\n");

    let (json2, code2) = run_cli(&["mult", "--table", "-"], Some(&table_text));
    assert_eq!(code2, 0);
    assert_eq!(json2["evidence"]["circuit"], circuit.as_str());
}

#[test]
fn reduce_scrambled_toffoli() {
    let (json, code) = run_cli(
        &["reduce", "--circuit", "-"],
        Some("X 3\nCNOT 1 2\nTOF 1 2 3\nCNOT 2 1\nX 1\n"),
    );
    assert_eq!(code, 0);
    assert_eq!(json["evidence"]["in_c3"], Value::Bool(true));
    assert_eq!(json["evidence"]["recomposition_exact"], Value::Bool(true));
    assert_eq!(json["evidence"]["mu_in_c3"], Value::Bool(true));
}

#[test]
fn staircase_success_and_failure() {
    let (json, code) = run_cli(&["staircase", "--circuit", "-"], Some("TOF 1 2 3\n"));
    assert_eq!(code, 0);
    assert_eq!(json["evidence"]["gates"], 1);

    // CNOT is affine, not a staircase permutation.
    let (json, code) = run_cli(&["staircase", "--circuit", "-"], Some("CNOT 1 2\n"));
    assert_eq!(code, 1);
    assert_eq!(json["evidence"]["staircase"], Value::Bool(false));
}

#[test]
fn verify_gm_passes() {
    let (json, code) = run_cli(&["verify-gm"], None);
    assert_eq!(code, 0);
    for clause in ["g_in_c3", "g_inv_x7_g_not_clifford", "fgf_inv_equals_u3"] {
        assert_eq!(json["evidence"][clause], Value::Bool(true), "{clause}");
    }
}

#[test]
fn pretty_flag_emits_multiline_json() {
    let out = Command::new(env!("CARGO_BIN_EXE_permc3"))
        .args(["uk", "3", "--pretty"])
        .output()
        .expect("run");
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().count() > 3);
    let json: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(json["verdict"], Value::Bool(true));
}
