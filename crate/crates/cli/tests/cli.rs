//! End-to-end runs of the compiled binary against the bundled fixtures.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hugeobject"))
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(output: &Output) -> serde_json::Value {
    assert!(
        output.status.success(),
        "exit {:?}, stderr: {}",
        output.status.code(),
        String::from_utf8_lossy(&output.stderr)
    );
    serde_json::from_slice(&output.stdout).expect("valid JSON on stdout")
}

#[test]
fn emd_of_bundled_two_point_files_is_half() {
    let out = run(&[
        "emd",
        "--d1",
        fixture("uniform_00_11.dist").to_str().unwrap(),
        "--d2",
        fixture("point00.dist").to_str().unwrap(),
    ]);
    let json = stdout_json(&out);
    let value = json["record"]["aggregate"]["value"].as_f64().unwrap();
    assert!((value - 0.5).abs() < 1e-9, "value {value}");
}

#[test]
fn invalid_mass_file_is_rejected_with_diagnostic() {
    let out = run(&[
        "emd",
        "--d1",
        fixture("bad_mass.dist").to_str().unwrap(),
        "--d2",
        fixture("point00.dist").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("sum"), "diagnostic should mention the mass sum: {stderr}");
}

#[test]
fn duplicate_support_lines_are_rejected() {
    let out = run(&[
        "emd",
        "--d1",
        fixture("duplicate.dist").to_str().unwrap(),
        "--d2",
        fixture("point00.dist").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("duplicate"));
}

#[test]
fn learn_on_bundled_clusters_reaches_high_success_rate() {
    let out = run(&[
        "learn",
        "--dist",
        fixture("three_cluster_512.dist").to_str().unwrap(),
        "--zeta",
        "0.01",
        "--delta",
        "0.01",
        "--r",
        "3",
        "--seed",
        "11",
        "--c-t1",
        "0.012",
        "--c-t2",
        "0.00017",
        "--trials",
        "50",
    ]);
    let json = stdout_json(&out);
    let rate = json["record"]["aggregate"]["success_rate"].as_f64().unwrap();
    assert!(rate >= 0.9, "success rate {rate}");
}

#[test]
fn zero_trials_produce_a_valid_empty_record() {
    let out = run(&[
        "learn",
        "--dist",
        fixture("three_cluster_512.dist").to_str().unwrap(),
        "--zeta",
        "0.01",
        "--delta",
        "0.01",
        "--r",
        "3",
        "--c-t1",
        "0.012",
        "--c-t2",
        "0.00017",
        "--trials",
        "0",
    ]);
    let json = stdout_json(&out);
    assert_eq!(json["record"]["trials"].as_array().unwrap().len(), 0);
}

#[test]
fn strict_mode_exits_three_on_fail_verdicts() {
    let out = run(&[
        "learn",
        "--dist",
        fixture("scattered_64.dist").to_str().unwrap(),
        "--zeta",
        "0.01",
        "--delta",
        "0.01",
        "--r",
        "1",
        "--c-t1",
        "0.01",
        "--c-t2",
        "0.001",
        "--trials",
        "2",
        "--strict",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn learn_records_are_reproducible_modulo_wall_clock() {
    let dist = fixture("three_cluster_512.dist");
    let args = [
        "learn",
        "--dist",
        dist.to_str().unwrap(),
        "--zeta",
        "0.01",
        "--delta",
        "0.01",
        "--r",
        "3",
        "--seed",
        "21",
        "--c-t1",
        "0.012",
        "--c-t2",
        "0.00017",
        "--trials",
        "3",
    ];
    let a = stdout_json(&run(&args));
    let b = stdout_json(&run(&args));
    assert_eq!(a["record"], b["record"]);
}

#[test]
fn parallel_trials_produce_the_same_records() {
    let dist = fixture("three_cluster_512.dist");
    let base = [
        "learn",
        "--dist",
        dist.to_str().unwrap(),
        "--zeta",
        "0.01",
        "--delta",
        "0.01",
        "--r",
        "3",
        "--seed",
        "31",
        "--c-t1",
        "0.012",
        "--c-t2",
        "0.00017",
        "--trials",
        "4",
    ];
    let serial = stdout_json(&run(&base));
    let mut parallel_args: Vec<&str> = base.to_vec();
    parallel_args.extend(["--parallelism", "2"]);
    let parallel = stdout_json(&run(&parallel_args));
    assert_eq!(serial["record"]["trials"], parallel["record"]["trials"]);
}

#[test]
fn gen_instance_round_trips_through_emd() {
    let dir = std::env::temp_dir().join("hugeobject-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("pvc_yes.dist");
    let out = run(&[
        "gen-instance",
        "--family",
        "pvc-yes",
        "--params",
        r#"{"k_rows":8,"ell":8,"ell_prime":2,"k_prime":2,"n":16}"#,
        "--seed",
        "5",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    // the produced file must parse and have zero self-distance
    let out = run(&["emd", "--d1", path.to_str().unwrap(), "--d2", path.to_str().unwrap()]);
    let json = stdout_json(&out);
    assert_eq!(json["record"]["aggregate"]["value"].as_f64().unwrap(), 0.0);
}

#[test]
fn gap_instance_file_round_trips_into_the_tester() {
    let dir = std::env::temp_dir().join("hugeobject-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("gap_yes.dist");
    let out = run(&[
        "gen-instance",
        "--family",
        "gap-yes",
        "--params",
        r#"{"n":128}"#,
        "--seed",
        "17",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    // the same seed rebuilds the same code pair, so the tester can decode
    let out = run(&[
        "gap-adaptive",
        "--dist",
        path.to_str().unwrap(),
        "--n",
        "128",
        "--epsilon",
        "0.3",
        "--seed",
        "17",
        "--trials",
        "1",
        "--c-fp",
        "0.5",
    ]);
    let json = stdout_json(&out);
    assert_eq!(json["record"]["trials"][0]["verdict"], serde_json::json!("Accept"));
}

#[test]
fn gap_adaptive_accepts_generated_yes_instances() {
    let out = run(&[
        "gap-adaptive",
        "--gen",
        "yes",
        "--n",
        "128",
        "--epsilon",
        "0.3",
        "--seed",
        "9",
        "--trials",
        "2",
        "--c-fp",
        "0.5",
    ]);
    let json = stdout_json(&out);
    let rate = json["record"]["aggregate"]["accept_rate"].as_f64().unwrap();
    assert!(rate >= 0.5, "accept rate {rate}");
    assert!(json["record"]["code_descriptor"]["zeta_measured"].as_f64().unwrap() > 0.0);
}

#[test]
fn simulate_transform_exp_agrees_perfectly() {
    let out = run(&[
        "simulate-transform",
        "--tester",
        "complement-pair",
        "--transform",
        "exp",
        "--n",
        "12",
        "--trials",
        "50",
        "--seed",
        "3",
    ]);
    let json = stdout_json(&out);
    assert_eq!(json["record"]["aggregate"]["agreement"].as_f64().unwrap(), 1.0);
    assert_eq!(json["record"]["aggregate"]["simulated_nonadaptive"], serde_json::json!(true));
}

#[test]
fn verify_codes_emits_a_descriptor() {
    let out = run(&["verify-codes", "--l", "3", "--seed", "4"]);
    let json = stdout_json(&out);
    assert_eq!(json["record"]["aggregate"]["ok"], serde_json::json!(true));
    assert_eq!(json["record"]["code_descriptor"]["l"], serde_json::json!(3));
}
