use std::process::{Command, Output};

use serde_json::Value;

fn haar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_haar"))
        .args(args)
        .env_remove("HAAR_MAX_GROUP_ORDER")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

#[test]
fn iso_exceptional_pair() {
    let out = haar(&[
        "iso",
        "--n",
        "8",
        "--set",
        "0,1,2,5",
        "--other",
        "0,1,5,6",
        "--json",
        "--check-oracle",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["isomorphic"], true);
    assert_eq!(v["route"], "exceptional");
    assert_eq!((v["u"].as_u64(), v["v"].as_u64()), (Some(2), Some(1)));
    assert_eq!(v["oracle_agrees"], true);
}

#[test]
fn iso_oracle_route_for_other_valencies() {
    let out = haar(&["iso", "--n", "7", "--set", "0,1,3", "--other", "0,2,6", "--json"]);
    let v = json(&out);
    assert_eq!(v["route"], "oracle");
    assert_eq!(v["isomorphic"], true);
}

#[test]
fn strict_exit_codes() {
    let no = haar(&["iso", "--n", "10", "--set", "0,1,3,4", "--other", "0,1,2,4", "--strict"]);
    assert_eq!(no.status.code(), Some(1));
    let lax = haar(&["iso", "--n", "10", "--set", "0,1,3,4", "--other", "0,1,2,4"]);
    assert_eq!(lax.status.code(), Some(0));
    let bci = haar(&["bci", "--n", "16", "--set", "0,1,2,9", "--strict", "--json"]);
    assert_eq!(bci.status.code(), Some(1));
    assert_eq!(json(&bci)["bci"], false);
}

#[test]
fn usage_and_input_errors() {
    assert_eq!(haar(&["iso", "--n", "8"]).status.code(), Some(2));
    assert_eq!(haar(&["canon", "--n", "8", "--set", "0,1,9"]).status.code(), Some(2));
    let bad = haar(&["iso", "--n", "8", "--set", "0,2,4,6", "--other", "0,1,2,5"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn resource_cap_exit_code() {
    let out = haar(&["bci", "--n", "16", "--set", "0,1,8,9", "--method", "structural"]);
    assert_eq!(out.status.code(), Some(3));
    let out = Command::new(env!("CARGO_BIN_EXE_haar"))
        .args(["bicyclic", "--n", "10", "--set", "0,1,3,4"])
        .env("HAAR_MAX_GROUP_ORDER", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let ok = haar(&[
        "bicyclic",
        "--n",
        "16",
        "--set",
        "0,1,8,9",
        "--max-group-order",
        "4194304",
        "--json",
    ]);
    assert_eq!(ok.status.code(), Some(0));
}

#[test]
fn aut_and_bicyclic_json() {
    let v = json(&haar(&["aut", "--n", "10", "--set", "0,1,3,4", "--json"]));
    assert_eq!(v["order"], "80");
    assert_eq!(v["edge_transitive"], true);
    let v = json(&haar(&["bicyclic", "--n", "8", "--set", "0,1,2,5", "--json"]));
    assert_eq!(v["classes"], 2);
}

#[test]
fn canon_aff_eq_ci_graph() {
    let v = json(&haar(&["canon", "--n", "10", "--set", "3,4,6,7", "--json"]));
    assert_eq!(v["canonical"], serde_json::json!([0, 1, 3, 4]));
    let v = json(&haar(&[
        "aff-eq", "--n", "8", "--set", "0,1,2,5", "--other", "0,1,5,6", "--json",
    ]));
    assert_eq!(v["equivalent"], false);
    let v = json(&haar(&[
        "ci", "--n", "8", "--set", "1,2,5", "--method", "both", "--json",
    ]));
    assert_eq!(v["ci"], false);
    let v = json(&haar(&[
        "graph",
        "--n",
        "3",
        "--set",
        "0,1",
        "--emit-adjacency",
        "--json",
    ]));
    assert_eq!(v["edges"].as_array().unwrap().len(), 6);
    let v = json(&haar(&[
        "graph", "--n", "5", "--set", "1,2", "--kind", "cayley", "--json",
    ]));
    assert_eq!(v["kind"], "cayley");
}

#[test]
fn verify_lemmas_passes() {
    let out = haar(&["verify-lemmas", "--n-max", "16"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().all(|l| !l.starts_with("FAIL")), "{text}");
}

fn without_timing(text: &str) -> Vec<Value> {
    text.lines()
        .map(|l| {
            let mut v: Value = serde_json::from_str(l).unwrap();
            v.as_object_mut().unwrap().remove("timing_ms");
            v
        })
        .collect()
}

#[test]
fn census_is_deterministic_and_resumable() {
    let dir = tempfile::tempdir().unwrap();
    let full = dir.path().join("full.jsonl");
    let single = dir.path().join("single.jsonl");
    let f = full.to_str().unwrap();
    let s = single.to_str().unwrap();
    assert!(haar(&["census", "--n", "8..12", "--k", "4", "--out", f])
        .status
        .success());
    assert!(haar(&["census", "--n", "8..12", "--k", "4", "--out", s, "--jobs", "1"])
        .status
        .success());
    let a = std::fs::read_to_string(&full).unwrap();
    let b = std::fs::read_to_string(&single).unwrap();
    assert_eq!(without_timing(&a), without_timing(&b));

    // cut the file inside the n = 9 block and resume
    let lines: Vec<&str> = a.lines().collect();
    let first_summary = lines.iter().position(|l| l.contains("\"summary\"")).unwrap();
    let partial = lines[..first_summary + 3].join("\n") + "\n{\"modulus\":10,\"el";
    std::fs::write(&single, partial).unwrap();
    assert!(haar(&["census", "--n", "8..12", "--k", "4", "--out", s, "--resume"])
        .status
        .success());
    let c = std::fs::read_to_string(&single).unwrap();
    assert_eq!(without_timing(&a), without_timing(&c));

    let summaries: Vec<Value> = without_timing(&a)
        .into_iter()
        .filter(|v| v["summary"] == true)
        .collect();
    let flags: Vec<(u64, bool)> = summaries
        .iter()
        .map(|v| (v["modulus"].as_u64().unwrap(), v["has_non_bci"].as_bool().unwrap()))
        .collect();
    assert_eq!(
        flags,
        vec![(8, true), (9, false), (10, false), (11, false), (12, false)]
    );
}
