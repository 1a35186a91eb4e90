use std::process::{Command, Output};

use serde_json::Value;

fn hglcorr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hglcorr"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn qdim_level_two_vacuum() {
    let o = hglcorr(&["qdim", "--level", "2", "--lambda", "0,0", "--order", "6"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "1 + q + 3q^2 + 5q^3 + 10q^4 + 16q^5 + O(q^6)\n");
}

#[test]
fn oracle_and_theta_series_are_byte_identical_at_level_one() {
    let base = [
        "npoint", "--level", "1", "--lambda", "0", "--s", "2", "--order", "6", "--json",
    ];
    let a = json(&hglcorr(&[&base[..], &["--method", "oracle"]].concat()));
    let b = json(&hglcorr(&[&base[..], &["--method", "theta"]].concat()));
    assert_eq!(a["method"], "oracle");
    assert_eq!(
        serde_json::to_string(&a["series"]).unwrap(),
        serde_json::to_string(&b["series"]).unwrap()
    );
    assert_eq!(a["series"]["den"], 8);
    assert_eq!(a["s"][0], "2/1");
}

#[test]
fn verify_all_on_defaults_passes() {
    let o = hglcorr(&["verify", "--id", "all", "--order", "8"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(stdout(&o).lines().count(), 8);
    assert!(stdout(&o).lines().all(|l| l.contains("EQUAL")));
}

#[test]
fn verify_single_identity_as_json() {
    let o = hglcorr(&[
        "verify", "--id", "cor42", "--level", "2", "--lambda", "0,0", "--order", "12", "--json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let r = &v["reports"][0];
    assert_eq!(r["name"], "cor42");
    assert_eq!(r["equal"], true);
    assert_eq!(r["left_digest"], r["right_digest"]);
}

#[test]
fn method_all_reports_every_pair() {
    let o = hglcorr(&[
        "npoint", "--level", "1", "--lambda", "1", "--s", "3/2", "--order", "4", "--method", "all",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for pair in [
        "theta vs kostka: equal",
        "theta vs oracle: equal",
        "kostka vs oracle: equal",
    ] {
        assert!(out.contains(pair), "{out}");
    }
}

#[test]
fn method_all_exits_three_on_disagreement() {
    let o = hglcorr(&[
        "npoint", "--level", "2", "--s", "2", "--order", "3", "--method", "all",
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("theta vs oracle: differ at q^0"));
}

#[test]
fn output_does_not_depend_on_threads() {
    let args = [
        "npoint", "--level", "2", "--lambda", "1,-1", "--s", "2,5/3", "--order", "4", "--json",
        "--method", "all",
    ];
    let a = hglcorr(&[&args[..], &["--threads", "1"]].concat());
    let b = hglcorr(&[&args[..], &["--threads", "4"]].concat());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn preconditions_exit_two_and_name_the_field() {
    let cases: [(&[&str], &str); 5] = [
        (&["bo", "--s", "2,1/2"], "s: subset product of t equals 1"),
        (&["bo", "--s", "1"], "s:"),
        (&["qdim", "--level", "2", "--lambda", "0,1"], "lambda:"),
        (&["qdim", "--level", "2", "--lambda", "0"], "lambda:"),
        (&["qdim", "--order", "0"], "order:"),
    ];
    for (args, msg) in cases {
        let o = hglcorr(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8(o.stderr).unwrap();
        assert!(err.contains(msg), "{args:?}: {err}");
    }
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(hglcorr(&["npoint", "--bogus"]).status.code(), Some(1));
    assert_eq!(
        hglcorr(&["npoint", "--method", "magic"]).status.code(),
        Some(1)
    );
    assert_eq!(hglcorr(&[]).status.code(), Some(1));
    assert_eq!(hglcorr(&["--help"]).status.code(), Some(0));
}

#[test]
fn help_states_t_is_s_squared() {
    let o = hglcorr(&["--help"]);
    assert!(stdout(&o).contains("t = s^2"));
}

#[test]
fn kostka_csv_and_inverse() {
    let o = hglcorr(&[
        "kostka", "--size", "2", "--level", "2", "--lo", "0", "--hi", "2", "--csv",
    ]);
    assert_eq!(
        stdout(&o),
        "lambda\\mu,\"(2,0)\",\"(1,1)\"\n\"(2,0)\",1,1\n\"(1,1)\",0,1\n"
    );
    let o = hglcorr(&[
        "kostka",
        "--size",
        "2",
        "--level",
        "2",
        "--lo",
        "0",
        "--hi",
        "2",
        "--inverse",
        "--json",
    ]);
    assert_eq!(json(&o)["matrix"], serde_json::json!([[1, -1], [0, 1]]));
}

#[test]
fn series_csv_uses_q_exponents() {
    let o = hglcorr(&["bo", "--s", "2", "--order", "3", "--csv"]);
    assert_eq!(
        stdout(&o),
        "exponent,coefficient\n0,2/3\n1,13/6\n2,257/24\n"
    );
}

#[test]
fn writes_to_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bo.json");
    let o = hglcorr(&[
        "bo",
        "--s",
        "2",
        "--order",
        "3",
        "--json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(v["series"]["terms"][0][1], "2/3");
}
