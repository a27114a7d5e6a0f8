use std::path::Path;
use std::process::{Command, Output};

use ordercx_core::simplicial::models::octahedron;
use ordercx_core::specseq::FilteredChainComplex;
use serde_json::{json, Value};
use tempfile::TempDir;

const LEDGER: &str = include_str!("../fixtures/ledger.json");

fn ordercx(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ordercx")).args(args).output().expect("binary runs")
}

fn json_out(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn stratum<'a>(ledger: &'a mut Value, id: &str) -> &'a mut Value {
    ledger["strata"].as_array_mut().unwrap().iter_mut().find(|s| s["id"] == id).unwrap()
}

fn write(dir: &TempDir, name: &str, value: &Value) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, serde_json::to_string_pretty(value).unwrap()).unwrap();
    path.to_string_lossy().into_owned()
}

fn reproduce_with(ledger: &Value) -> Output {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "ledger.json", ledger);
    ordercx(&["reproduce", "fig1", "--ledger", &path, "--format", "json"])
}

fn shipped() -> Value {
    serde_json::from_str(LEDGER).unwrap()
}

#[test]
fn shipped_ledger_given_explicitly_passes() {
    let out = reproduce_with(&shipped());
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(json_out(&out)["mode"], "default");
}

#[test]
fn counterfactual_is_flagged() {
    let out = ordercx(&["reproduce", "fig1", "--counterfactual-d1-zero", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let r = json_out(&out);
    assert_eq!(r["non_paper"], true);
    assert_eq!(r["mode"], "counterfactual-d1-zero");
    let betti: Vec<u64> = serde_json::from_value(r["final_betti"].clone()).unwrap();
    let nonzero: Vec<usize> = betti.iter().enumerate().filter(|(_, n)| **n > 0).map(|(i, _)| i).collect();
    assert_eq!(nonzero, vec![0, 8, 9, 13]);
    let table = ordercx(&["reproduce", "fig1", "--counterfactual-d1-zero"]);
    assert!(String::from_utf8_lossy(&table.stdout).contains("(non-paper)"));
}

#[test]
fn blanked_contribution_is_an_input_error() {
    let mut l = shipped();
    stratum(&mut l, "J_5(a)")["contribution"]["value"] = Value::Null;
    let out = reproduce_with(&l);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("incomplete"), "{}", stderr(&out));
}

#[test]
fn shifted_fiber_is_a_mismatch_citing_its_reduction() {
    let mut l = shipped();
    stratum(&mut l, "J_3(b)")["fiber_bm"]["value"] = json!([[5, 1]]);
    let out = reproduce_with(&l);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr(&out);
    assert!(err.contains("J_3(b)") && err.contains("lemma39"), "{err}");
}

#[test]
fn uniform_shift_is_detected() {
    let mut l = shipped();
    for s in l["strata"].as_array_mut().unwrap() {
        if let Some(base) = s["base_bm"]["value"].as_array_mut() {
            for e in base {
                e["degree"] = json!(e["degree"].as_i64().unwrap() + 1);
            }
        }
        for field in ["fiber_bm", "contribution"] {
            if let Some(v) = s[field]["value"].as_array_mut() {
                for e in v {
                    e[0] = json!(e[0].as_i64().unwrap() + 1);
                }
            }
        }
    }
    let out = reproduce_with(&l);
    assert_eq!(out.status.code(), Some(1), "{}", stderr(&out));
}

#[test]
fn computed_field_disagreeing_with_its_verification_withholds_the_answer() {
    let mut l = shipped();
    stratum(&mut l, "J_4(b)")["base_bm"]["evidence"]["shift"] = json!(3);
    let out = reproduce_with(&l);
    assert_eq!(out.status.code(), Some(1));
    let r = json_out(&out);
    assert!(r["final_betti"].is_null());
    let failed: Vec<&Value> = r["field_checks"].as_array().unwrap().iter().filter(|f| f["passed"] == false).collect();
    assert_eq!(failed.len(), 1);
    assert_eq!(failed[0]["field"], "J_4(b).base_bm");
}

#[test]
fn undeclared_trusted_input_fails_the_audit() {
    let mut l = shipped();
    let tag = &mut stratum(&mut l, "J_2(b)")["fiber_bm"]["evidence"];
    tag["citations"].as_array_mut().unwrap().push(json!({"id": "folklore", "claim": "the fiber has no homology"}));
    let out = reproduce_with(&l);
    assert_eq!(out.status.code(), Some(3));
    let r = json_out(&out);
    assert!(r["final_betti"].is_null());
    assert_eq!(r["audit"]["undeclared"], json!(["folklore"]));
}

#[test]
fn unreadable_ledger_is_an_input_error() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(&path, "{ not json").unwrap();
    let out = ordercx(&["reproduce", "fig1", "--ledger", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let missing = ordercx(&["homology", "/nonexistent/complex.json"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn homology_of_facets_and_of_a_chain_complex() {
    let dir = TempDir::new().unwrap();
    let facets = write(&dir, "circle.json", &json!({"facets": [["a", "b"], ["b", "c"], ["a", "c"]]}));
    let r = json_out(&ordercx(&["homology", &facets, "--format", "json"]));
    assert_eq!(r["betti"], json!([[0, 1], [1, 1]]));
    assert_eq!(r["euler_characteristic"], 0);
    let chain = write(
        &dir,
        "rp2_cells.json",
        &json!({"cells": {"0": ["v"], "1": ["e"], "2": ["f"]}, "boundary": {"2": [[0, 0, 2]]}}),
    );
    let r = json_out(&ordercx(&["homology", &chain, "--format", "json"]));
    assert_eq!(r["betti"], json!([[0, 1], [1, 0], [2, 0]]));
    let table = ordercx(&["homology", &chain]);
    assert!(String::from_utf8_lossy(&table.stdout).contains("euler characteristic 1"));
}

#[test]
fn bad_boundary_is_rejected() {
    let dir = TempDir::new().unwrap();
    let chain = write(
        &dir,
        "bad.json",
        &json!({"cells": {"0": ["a", "b"], "1": ["e"], "2": ["f"]}, "boundary": {"1": [[0, 0, -1], [1, 0, 1]], "2": [[0, 0, 1]]}}),
    );
    assert_eq!(ordercx(&["homology", &chain]).status.code(), Some(2));
}

#[test]
fn poset_links() {
    let fixture = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/j4d.json");
    let fixture = fixture.to_str().unwrap();
    let r = json_out(&ordercx(&["poset", fixture, "--link", "X", "--format", "json"]));
    assert_eq!(r["reduced_betti"], json!([]));
    let r = json_out(&ordercx(&["poset", fixture, "--order-complex", "--format", "json"]));
    assert_eq!(r["reduced_betti"], json!([]));
    assert_eq!(ordercx(&["poset", fixture, "--link", "nowhere"]).status.code(), Some(2));
}

#[test]
fn specseq_of_a_skeletal_filtration() {
    let dir = TempDir::new().unwrap();
    let f = FilteredChainComplex::skeletal(octahedron().to_chain_complex(), 0);
    let path = write(&dir, "octahedron.json", &serde_json::to_value(f.to_json()).unwrap());
    let out = ordercx(&["specseq", &path, "--format", "json"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let r = json_out(&out);
    assert_eq!(r["converged"], true);
    assert_eq!(r["infinity_totals"], json!([[0, 1], [2, 1]]));
    let table = String::from_utf8_lossy(&ordercx(&["specseq", &path]).stdout).into_owned();
    assert!(table.contains("converged"), "{table}");
}

#[test]
fn verify_dispatch() {
    let out = ordercx(&["verify", "lemma1-p2", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json_out(&out);
    assert_eq!(r[0]["status"], "pass");
    assert_eq!(ordercx(&["verify", "lemma99"]).status.code(), Some(2));
    let trusted = json_out(&ordercx(&["verify", "lemma35", "--format", "json"]));
    assert_eq!(trusted[0]["status"], "trusted");
}
