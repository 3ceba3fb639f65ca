use std::fs;

use minext::cli::run;
use serde_json::Value;

fn json(args: &[&str]) -> (i32, Value) {
    let mut argv = vec!["minext"];
    argv.extend_from_slice(args);
    argv.extend_from_slice(&["--format", "json"]);
    let out = run(argv);
    let v = serde_json::from_str(&out.stdout).unwrap_or(Value::Null);
    (out.code, v)
}

fn show(name: &str) -> String {
    run(["minext", "catalog", "show", name, "--format", "json"]).stdout
}

#[test]
fn analyze_files_written_by_catalog_show() {
    let dir = tempfile::tempdir().unwrap();
    let svec = dir.path().join("svec.json");
    fs::write(&svec, show("svec")).unwrap();
    let (code, v) = json(&["analyze", svec.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["classification"], "slightly_degenerate");
    assert_eq!(v["components"]["component_count"], 2);
    assert_eq!(v["kappa"]["kappa_minus"], "1/1");
    assert_eq!(v["verdict"], "extension_exists_S");

    let semion = dir.path().join("semion.json");
    fs::write(&semion, show("semion")).unwrap();
    let out = run(["minext", "analyze", semion.to_str().unwrap()]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("nondegenerate"));
    assert!(out.stdout.contains("component_count       1"));

    let (code, v) = json(&["extend", svec.to_str().unwrap()]);
    assert_eq!(code, 0);
    let sigs: Vec<u64> = v["classes"].as_array().unwrap().iter().map(|c| c["signature"].as_u64().unwrap()).collect();
    let mut sorted = sigs.clone();
    sorted.sort();
    assert_eq!(sorted, (0..8).collect::<Vec<_>>());
}

#[test]
fn validation_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    let mut v: Value = serde_json::from_str(&show("ising:1")).unwrap();
    v["dims"][1] = serde_json::json!({"n": 1, "c": [["2", "1"]]});
    v.as_object_mut().unwrap().remove("s");
    fs::write(&path, v.to_string()).unwrap();
    let out = run(["minext", "analyze", path.to_str().unwrap()]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("dimension_character_violation"), "{}", out.stderr);

    let (code, v) = json(&["validate", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert_eq!(v["valid"], false);
    assert!(v["violations"]
        .as_array()
        .unwrap()
        .iter()
        .any(|x| x["kind"] == "dimension_character_violation"));

    fs::write(&path, "{ not json").unwrap();
    assert_eq!(run(["minext", "analyze", path.to_str().unwrap()]).code, 2);
    assert_eq!(run(["minext", "analyze", "/nonexistent/file.json"]).code, 2);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(["minext", "analyze", "catalog:svec", "--bogus"]).code, 2);
    assert_eq!(run(["minext"]).code, 2);
    assert_eq!(run(["minext", "analyze", "catalog:svec", "--format", "xml"]).code, 2);
    let help = run(["minext", "--help"]);
    assert_eq!(help.code, 0);
    assert!(help.stdout.contains("extend"));
}

#[test]
fn unknown_catalog_key_lists_valid_keys() {
    let out = run(["minext", "catalog", "show", "nonsense"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("svec"));
}

#[test]
fn kappa_and_extend_reject_wrong_inputs() {
    assert_eq!(run(["minext", "kappa", "catalog:semion"]).code, 2);
    assert_eq!(run(["minext", "extend", "catalog:semion"]).code, 2);
    assert_eq!(run(["minext", "extend", "catalog:ising:1"]).code, 2);
    assert_eq!(run(["minext", "extend", "catalog:svec", "--max-order", "2"]).code, 2);
}

#[test]
fn free_fermion_equivalence_is_coarser() {
    let (_, fixed) = json(&["extend", "catalog:svec-x-semion"]);
    let (_, free) = json(&["extend", "catalog:svec-x-semion", "--free-fermion"]);
    assert!(free["count"].as_u64().unwrap() <= fixed["count"].as_u64().unwrap());
    assert!(free["count"].as_u64().unwrap() >= 1);
}

#[test]
fn gauss_components_and_kappa_reports() {
    let (code, v) = json(&["gauss", "catalog:z4-q:1"]);
    assert_eq!(code, 0);
    assert_eq!(v["signature_mod8"], 1);
    assert_eq!(v["gauss_sum_display"], "2*z8");
    let (_, v) = json(&["gauss", "catalog:ising:3"]);
    assert_eq!(v["gauss_sum_display"], "2*z16^3");

    let (code, v) = json(&["components", "catalog:svec", "--seed", "17"]);
    assert_eq!(code, 0);
    assert_eq!(v["seed"], 17);
    assert_eq!(v["magnetic_index"], 0);

    let (code, v) = json(&["kappa", "catalog:pointed:2x4:1/2,1/8"]);
    assert_eq!(code, 0);
    assert_eq!(v["n_self_dual"], 4);
    assert_eq!(v["kappa_plus"], "2/1");
}

#[test]
fn catalog_listing() {
    let (code, v) = json(&["catalog", "list"]);
    assert_eq!(code, 0);
    let names: Vec<&str> = v.as_array().unwrap().iter().map(|x| x["name"].as_str().unwrap()).collect();
    assert!(names.len() >= 18);
    assert!(names.contains(&"svec"));
    let table = run(["minext", "catalog", "list"]).stdout;
    assert_eq!(table.lines().count(), names.len());
}

#[test]
fn timings_are_opt_in() {
    let (_, v) = json(&["analyze", "catalog:toric"]);
    assert!(v.get("timings_ms").is_none());
    let (_, v) = json(&["analyze", "catalog:toric", "--timings"]);
    assert!(v["timings_ms"].is_array());
}
