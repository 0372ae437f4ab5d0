use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn racg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_racg"))
        .args(args)
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn check_reports_witnesses() {
    let ok = racg(&["check", "fixture:pentagon", "--k", "5"]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(json(&ok)["k_large"], true);
    let bad = racg(&["check", "fixture:cycle4", "--k", "5"]);
    assert_eq!(bad.status.code(), Some(2));
    let v = json(&bad);
    assert_eq!(v["k_large"], false);
    assert_eq!(v["witness"]["kind"], "full_cycle");
    assert_eq!(v["witness"]["vertices"].as_array().unwrap().len(), 4);
    let sd2 = racg(&["check", "fixture:icosahedron", "--k", "6", "--sd2"]);
    assert_eq!(json(&sd2)["sd2"]["holds"], false);
    let cubical = racg(&["check", "fixture:square_grid3", "--cubical", "--k", "4"]);
    assert_eq!(cubical.status.code(), Some(0));
    assert_eq!(json(&cubical)["locally_k_large"], true);
}

#[test]
fn coxeter_summary() {
    let v = json(&racg(&["coxeter", "--nerve", "fixture:pentagon"]));
    assert_eq!(v["generators"].as_array().unwrap().len(), 5);
    assert_eq!(v["commuting_pairs"].as_array().unwrap().len(), 5);
    assert_eq!(v["spherical_subsets"], 11);
    assert_eq!(v["hyperbolic"], true);
    assert_eq!(v["vcd"]["bound"], 2);
}

#[test]
fn quotient_writes_y() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("y.json");
    let out = racg(&[
        "quotient",
        "--nerve",
        "fixture:s0",
        "--modulus",
        "3",
        "--displacement",
        "6",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v = json(&out);
    assert_eq!(v["quotient"]["order"], 6);
    assert_eq!(v["certificate"]["cube_counts"], serde_json::json!([6, 6]));
    assert_eq!(v["certificate"]["orientable"], "direct");
    let y: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(y["type"], "cubical");
    assert_eq!(y["cubes"].as_array().unwrap().len(), 6);

    let th = racg(&["thicken", path.to_str().unwrap()]);
    let x = json(&th);
    assert_eq!(x["type"], "simplicial");
    assert_eq!(x["maximal_faces"].as_array().unwrap().len(), 6);

    let far = racg(&[
        "quotient",
        "--nerve",
        "fixture:s0",
        "--modulus",
        "3",
        "--displacement",
        "7",
    ]);
    assert_eq!(far.status.code(), Some(2));
    assert_eq!(json(&far)["displacement_check"]["witness"]["distance"], 6);
}

#[test]
fn homology_of_rp2() {
    let v = json(&racg(&["homology", "fixture:rp2", "--degree", "1"]));
    assert_eq!(v["rank"], 0);
    assert_eq!(v["torsion"], serde_json::json!(["2"]));
    let f2 = json(&racg(&["homology", "fixture:rp2", "--coeff", "f2"]));
    let ranks: Vec<u64> = f2["groups"]
        .as_array()
        .unwrap()
        .iter()
        .map(|g| g["rank"].as_u64().unwrap())
        .collect();
    assert_eq!(ranks, vec![1, 1, 1]);
    let bad = racg(&["homology", "fixture:rp2", "--coeff", "fp:4"]);
    assert_ne!(bad.status.code(), Some(0));
    assert!(!bad.stderr.is_empty());
}

#[test]
fn pipeline_with_replay() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("config.json");
    fs::write(&config, r#"{"x0": "fixture:s0", "radii": [5]}"#).unwrap();
    let out_dir = dir.path().join("run");
    let run = racg(&[
        "pipeline",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(
        run.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&run.stderr)
    );
    assert_eq!(json(&run)["status"], "success");
    let again = racg(&[
        "pipeline",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
        "--resume",
    ]);
    assert_eq!(again.stdout, run.stdout);
    let replay = racg(&["pipeline", "--replay", out_dir.to_str().unwrap()]);
    assert_eq!(replay.status.code(), Some(0));
    assert_eq!(json(&replay)["ok"], true);

    fs::write(&config, r#"{"x0": "fixture:s0", "k_large": 4}"#).unwrap();
    let bad = racg(&["pipeline", "--config", config.to_str().unwrap()]);
    assert_ne!(bad.status.code(), Some(0));
}

#[test]
fn fixtures_round_trip() {
    let list = json(&racg(&["fixture", "--list"]));
    assert!(list["simplicial"]
        .as_array()
        .unwrap()
        .iter()
        .any(|n| n == "petersen"));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("octahedron.json");
    fs::write(&path, racg(&["fixture", "octahedron"]).stdout).unwrap();
    let v = json(&racg(&["check", path.to_str().unwrap(), "--k", "5"]));
    assert_eq!(v["k_large"], false);
    assert!(racg(&["fixture", "nope"]).status.code() != Some(0));
}
