use std::path::Path;
use std::process::{Command, Output};

use lambda_core::cyclolayer::{synthetic_certificate, tamper};
use lambda_core::quadfield::QuadElement;
use num_bigint::BigInt;
use serde_json::Value;

fn lambda(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lambda")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write_cert(dir: &Path, name: &str, json: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, json).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn gold_minus_11_at_3() {
    let o = lambda(&["gold", "--disc", "-11", "--p", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("λ ≥ 1  PROVED"), "{out}");
    assert!(out.contains("λ ≥ 2  REFUTED"), "{out}");
}

#[test]
fn p_dividing_h_is_a_precondition_failure() {
    let o = lambda(&["gold", "--disc", "-23", "--p", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("p divides h"), "{}", stderr(&o));
}

#[test]
fn gold_json_round_trips() {
    let o = lambda(&["gold", "--disc", "-35", "--p", "3", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["disc"], "-35");
    let statuses: Vec<&str> = v["verdicts"].as_array().unwrap().iter().map(|x| x["status"].as_str().unwrap()).collect();
    assert_eq!(statuses, ["PROVED", "PROVED", "NEEDS_CERTIFICATE"]);
    let again: Value = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
    assert_eq!(v, again);
}

#[test]
fn sweep_lists_split_fields_in_order() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep.jsonl");
    let o = lambda(&["sweep", "--dmin", "-50", "--dmax", "-3", "--p", "3", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = std::fs::read_to_string(&out).unwrap();
    let discs: Vec<i64> = text
        .lines()
        .map(|l| serde_json::from_str::<Value>(l).unwrap()["disc"].as_str().unwrap().parse().unwrap())
        .collect();
    // 3 splits in these fields and 3 ∤ h; -23 is skipped for p | h.
    assert_eq!(discs, [-8, -11, -20, -35, -47]);
    assert!(!discs.contains(&-23) && !discs.contains(&-4) && !discs.contains(&-3));
}

#[test]
fn sweep_is_deterministic() {
    let a = lambda(&["sweep", "--dmin", "-120", "--dmax", "-3", "--p", "5"]);
    let b = lambda(&["sweep", "--dmin", "-120", "--dmax", "-3", "--p", "5"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn empty_sweep_range() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("empty.jsonl");
    let o = lambda(&["sweep", "--dmin", "-3", "--dmax", "-50", "--p", "3", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&out).unwrap(), "");
    let o = lambda(&["sweep", "--dmin", "-10", "--dmax", "5", "--p", "3"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn synthetic_certificate_is_experimental() {
    let dir = tempfile::tempdir().unwrap();
    let cert = synthetic_certificate(-35, 3, &QuadElement::one(-35), &[1, 0, 2]).unwrap();
    let path = write_cert(dir.path(), "c.json", &cert.to_json());
    let o = lambda(&["verify", "--cert", &path, "--synthetic", "--json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["verdicts"][2]["level"], 3);
    assert_eq!(v["verdicts"][2]["status"], "EXPERIMENTAL");
    assert_eq!(v["certificate"]["synthetic"], true);
}

#[test]
fn norm_mismatch_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let cert = synthetic_certificate(-35, 3, &QuadElement::one(-35), &[1, 0, 2]).unwrap();
    // N(β) = 27 is not Gold's α.
    let path = write_cert(dir.path(), "c.json", &cert.to_json());
    let o = lambda(&["verify", "--cert", &path]);
    assert_eq!(o.status.code(), Some(4), "{}", stderr(&o));
    let path = write_cert(dir.path(), "t.json", &tamper(&cert).to_json());
    let o = lambda(&["verify", "--cert", &path]);
    assert_eq!(o.status.code(), Some(4), "{}", stderr(&o));
}

#[test]
fn malformed_certificate_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_cert(dir.path(), "bad.json", "{\"disc\": \"-35\"}");
    let o = lambda(&["verify", "--cert", &path]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn bad_generator_hint_names_q() {
    let dir = tempfile::tempdir().unwrap();
    let d = -11;
    let mut cert = synthetic_certificate(d, 5, &QuadElement::from_int(d, 7), &[1]).unwrap();
    // η₀ itself does not generate O/7.
    let eta0 = cert.field().eta0().iter().map(|&x| BigInt::from(x)).collect();
    cert.prime_hints.insert(BigInt::from(7), eta0);
    let path = write_cert(dir.path(), "c.json", &cert.to_json());
    let o = lambda(&["verify", "--cert", &path, "--synthetic"]);
    assert_eq!(o.status.code(), Some(4), "{}", stderr(&o));
    let err = stderr(&o);
    assert!(err.contains("prime_data") && err.contains("\"q\": \"7\""), "{err}");
}

#[test]
fn demo_mn_order() {
    let o = lambda(&["demo", "mn", "--p", "3", "--n", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("order 81 (expected 81)"));
}

#[test]
fn demo_bockstein_all_agree() {
    let o = lambda(&["demo", "bockstein", "--p", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("direct = formula (as cochains): 100/100"));
}

#[test]
fn demo_json_is_a_suite_report() {
    let o = lambda(&["demo", "periods", "--p", "5", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["topic"], "periods");
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["passed"] == c["total"]));
}

#[test]
fn unknown_topic_is_usage_error() {
    assert_eq!(lambda(&["demo", "nonsense"]).status.code(), Some(1));
    assert_eq!(lambda(&["demo", "mn", "--p", "4"]).status.code(), Some(1));
    assert_eq!(lambda(&["gold", "--disc", "-11"]).status.code(), Some(1));
    assert_eq!(lambda(&["--help"]).status.code(), Some(0));
}

#[test]
fn selftest_passes() {
    let o = lambda(&["selftest"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
}
