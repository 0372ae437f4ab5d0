use std::fs;

use racg_core::io::{self, SimplicialJson};
use racg_core::pipeline::{replay, run_pipeline, run_pipeline_in, PipelineConfig};
use racg_core::Error;

fn config(x0: &str) -> PipelineConfig {
    PipelineConfig::new(x0)
}

#[test]
fn config_file_defaults() {
    let c: PipelineConfig = serde_json::from_str(r#"{"x0": "fixture:s0"}"#).unwrap();
    assert_eq!(c, config("fixture:s0"));
    assert_eq!(c.moduli, vec![3, 5, 7, 9, 11, 13]);
    assert_eq!(c.radius(0), 5);
    assert!(
        serde_json::from_str::<PipelineConfig>(r#"{"x0": "fixture:s0", "radius": 5}"#).is_err()
    );
    let c: PipelineConfig =
        serde_json::from_str(r#"{"x0": "x.json", "coefficients": "f2", "radii": [6]}"#).unwrap();
    assert_eq!(c.radius(0), 6);
}

#[test]
fn invalid_configs_are_domain_errors() {
    let mut c = config("fixture:s0");
    c.k_large = 4;
    assert!(matches!(run_pipeline(&c), Err(Error::Domain(_))));
    let mut c = config("fixture:s0");
    c.moduli.clear();
    assert!(matches!(run_pipeline(&c), Err(Error::Domain(_))));
    assert!(run_pipeline(&config("fixture:nope")).is_err());
}

#[test]
fn reports_are_deterministic() {
    let a = io::to_json_string(&run_pipeline(&config("fixture:s0")).unwrap().report).unwrap();
    let b = io::to_json_string(&run_pipeline(&config("fixture:s0")).unwrap().report).unwrap();
    assert_eq!(a, b);
    assert!(!a.contains("seconds"));
}

#[test]
fn tracked_subcomplex_stays_full() {
    let mut c = config("fixture:s0");
    c.track = Some(vec!["s".into()]);
    let out = run_pipeline(&c).unwrap();
    let t = out.report.stages[0]
        .output
        .as_ref()
        .unwrap()
        .tracked
        .as_ref()
        .unwrap();
    assert!(t.full);
    assert_eq!(t.injection.len(), 1);
    let x = out.final_nerve.unwrap();
    let names: Vec<String> = t.injection.values().cloned().collect();
    let z = x.induced_by_names(&names).unwrap();
    assert!(x.is_full_subcomplex(&z).unwrap());
}

#[test]
fn non_hyperbolic_and_non_flag_inputs_are_rejected() {
    for x0 in [
        "fixture:cycle4",
        "fixture:octahedron",
        "fixture:tetrahedron_boundary",
    ] {
        let out = run_pipeline(&config(x0)).unwrap();
        assert_eq!(out.report.exit_code, 2, "{x0}");
        assert_eq!(out.report.status, "verification_failure");
        assert!(out.final_nerve.is_none());
    }
}

#[test]
fn artifacts_resume_and_replay() {
    let dir = tempfile::tempdir().unwrap();
    let c = config("fixture:s0");
    let first = run_pipeline_in(&c, Some(dir.path()), false).unwrap();
    for f in [
        "config.json",
        "report.json",
        "timings.json",
        "stage_1/nerve.json",
        "stage_1/report.json",
        "stage_1/quotient.json",
        "stage_1/x_prime.json",
    ] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
    let saved = fs::read_to_string(dir.path().join("report.json")).unwrap();
    assert_eq!(saved, io::to_json_string(&first.report).unwrap());
    let x: SimplicialJson = io::read_json(&dir.path().join("stage_1/x_prime.json")).unwrap();
    assert!(x
        .to_complex()
        .unwrap()
        .same_complex(first.final_nerve.as_ref().unwrap()));

    let again = run_pipeline_in(&c, Some(dir.path()), true).unwrap();
    assert!(again.timings[0].resumed);
    assert_eq!(
        fs::read_to_string(dir.path().join("report.json")).unwrap(),
        saved
    );

    let r = replay(dir.path()).unwrap();
    assert!(r.ok, "{r:?}");
    assert!(r.stages.iter().all(|s| s.report_matches && s.input_chained));

    let path = dir.path().join("stage_1/x_prime.json");
    let mut tampered = x.clone();
    tampered.maximal_faces.pop();
    io::write_json(&path, &tampered).unwrap();
    assert!(!replay(dir.path()).unwrap().ok);
}

#[test]
fn pentagon_stage() {
    let out = run_pipeline(&config("fixture:pentagon")).unwrap();
    assert_eq!(out.report.status, "success");
    let s = &out.report.stages[0];
    let q = s.quotient.as_ref().unwrap();
    assert_eq!(q.modulus, Some(3));
    assert!(q.group_order.unwrap() <= 103_680);
    let o = s.output.as_ref().unwrap();
    assert!(o.largeness.holds);
    assert_eq!(s.certificates.delta_f_prime_zero, Some(true));
    assert_eq!(s.certificates.f_prime_nontrivial, Some(true));
    let x = out.final_nerve.unwrap();
    assert!(x.is_k_large(5).unwrap());
    assert_eq!(o.betti_matches_y, Some(true));
    assert!(o.betti_q.as_ref().unwrap()[2] > 0);
    assert!(o.next_vcd_lower_bound.unwrap() >= 3);
}
