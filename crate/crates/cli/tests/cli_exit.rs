use std::process::Command;

use serde_json::Value as Json;

fn genkahler(args: &[&str]) -> (i32, Json) {
    let out = Command::new(env!("CARGO_BIN_EXE_genkahler")).args(args).output().expect("binary runs");
    let report = serde_json::from_slice(&out.stdout).unwrap_or(Json::Null);
    (out.status.code().expect("exit code"), report)
}

#[test]
fn pass_is_zero() {
    let (code, r) = genkahler(&["check-poisson", "--n", "2", "--set", "beta=z1*@1^^@2"]);
    assert_eq!(code, 0);
    assert_eq!(r["tasks"][0]["details"]["poisson"], Json::Bool(true));
    assert_eq!(r["tasks"][0]["details"]["brackets"]["z1,z2"], "-z1");
}

#[test]
fn failed_check_is_one() {
    let (code, r) = genkahler(&["check-poisson", "--n", "3", "--set", "beta=z2*@1^^@2 + @2^^@3"]);
    assert_eq!(code, 1);
    assert_eq!(r["tasks"][0]["verdict"], "fail");
}

#[test]
fn input_errors_are_two() {
    let (code, r) = genkahler(&["check-poisson", "--n", "2", "--set", "beta=z1*@1^^"]);
    assert_eq!(code, 2);
    assert_eq!(r["tasks"][0]["error"]["code"], "parse");
    let (code, _) = genkahler(&["run", "--scenario", "/nonexistent/scenario.json"]);
    assert_eq!(code, 2);
    let (code, _) = genkahler(&["gcs-type", "--n", "2", "--set", "points=[[1, 2]]"]);
    assert_eq!(code, 2);
}

#[test]
fn degree_bound_exhaustion_is_three() {
    let (code, r) = genkahler(&["deform", "--n", "2", "--set", "beta=z1*@1^^@2", "--set", "order=6"]);
    assert_eq!(code, 3);
    assert_eq!(r["tasks"][0]["verdict"], "undecided");
    assert_eq!(r["tasks"][0]["error"]["code"], "no_solution");
}

#[test]
fn json_out_and_overrides() {
    let dir = std::env::temp_dir().join(format!("genkahler-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("report.json");
    let scenario = concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios/torus_cp1.json");
    let status = Command::new(env!("CARGO_BIN_EXE_genkahler"))
        .args(["obstruction-rank", "--scenario", scenario, "--seed", "99", "--json-out"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let r: Json = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(r["seed"], 99);
    assert!(r["tasks"].as_array().unwrap().iter().all(|t| t["command"] == "obstruction-rank"));
    std::fs::remove_dir_all(&dir).unwrap();
}
