use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name).display().to_string()
}

fn wittforge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wittforge")).args(args).output().expect("binary runs")
}

fn records(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout).lines().map(|l| serde_json::from_str(l).expect("one JSON record per line")).collect()
}

#[test]
fn identity_symbolic_passes() {
    let out = wittforge(&["verify-identity", "--m", "2", "--r", "2", "--mode", "symbolic"]);
    assert_eq!(out.status.code(), Some(0));
    let recs = records(&out);
    assert_eq!(recs.len(), 1);
    assert_eq!(recs[0]["pass"], true);
    assert_eq!(recs[0]["residue_term_count"], 0);
}

#[test]
fn identity_grid_streams_one_record_per_tuple() {
    let out = wittforge(&["verify-identity", "--mode", "grid", "--range", "-1..1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(records(&out).len(), 81);
}

#[test]
fn feigin_fuks_orders() {
    let yes = wittforge(&["annihilator", "--preset", "feigin_fuks_length2", "--m", "9"]);
    assert_eq!(yes.status.code(), Some(0));
    let no = wittforge(&["annihilator", "--preset", "feigin_fuks_length2", "--m", "8"]);
    assert_eq!(no.status.code(), Some(1));
    let rec = &records(&no)[0];
    assert!(rec["witness"].is_object(), "{rec}");
}

#[test]
fn punctured_cover_certificate() {
    let out = wittforge(&["acover", "--preset", "punctured_functions", "--window", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let recs = records(&out);
    assert_eq!(recs[0]["rank"], 1);
    let ranks = recs[0]["cuspidality"]["ranks"].as_array().unwrap();
    assert_eq!(ranks.len(), 15);
    assert!(ranks.iter().all(|r| r[1] == 1));
    assert_eq!(recs[1]["action_matches"], true);
}

#[test]
fn output_is_deterministic() {
    let args = ["acover", "--preset", "virasoro_adjoint", "--window", "2", "--seed", "11"];
    let a = wittforge(&args);
    let b = wittforge(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn module_files() {
    assert_eq!(wittforge(&["module-check", "--module", &fixture("virasoro_adjoint.json")]).status.code(), Some(0));
    assert_eq!(wittforge(&["module-check", "--module", &fixture("virasoro_corrupted.json")]).status.code(), Some(1));
    assert_eq!(wittforge(&["dual", "--module", &fixture("virasoro_corrupted.json")]).status.code(), Some(1));
}

#[test]
fn schema_violations_exit_two() {
    assert_eq!(wittforge(&["module-check", "--module", &fixture("unknown_key.json")]).status.code(), Some(2));
    assert_eq!(wittforge(&["module-check", "--preset", "no_such_module"]).status.code(), Some(2));
    assert_eq!(wittforge(&["verify-identity", "--colour", "red"]).status.code(), Some(2));
    assert_eq!(wittforge(&["verify-identity", "--m", "1"]).status.code(), Some(2));
    assert_eq!(wittforge(&["derham", "--n", "2", "--beta", "1,2,3"]).status.code(), Some(2));
}

#[test]
fn inconclusive_exits_three() {
    let out = Command::new(env!("CARGO_BIN_EXE_wittforge"))
        .args(["acover", "--preset", "virasoro_adjoint", "--window", "1"])
        .env("WITTFORGE_DEGREE_CEILING", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn jets_and_tensor_fields_agree() {
    let out = wittforge(&["jets", "--rep", &fixture("natural2.json"), "--beta", "1/3,b"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(records(&out)[0]["matches_tensor_field"], true);
}

#[test]
fn derham_and_twist() {
    assert_eq!(wittforge(&["derham", "--n", "2", "--beta", "1/2,0"]).status.code(), Some(0));
    let out = wittforge(&["twist", "--preset", "omega_forms", "--n", "2", "--k", "1", "--beta", "1/2,1/3", "--g", "2,1;1,1"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn csv_emission() {
    let out = wittforge(&["verify-identity", "--emit", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().contains("residue_term_count"));
    assert_eq!(lines.count(), 1);
}
