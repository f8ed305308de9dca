use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use tricyclic::sweep::SweepReport;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tricyclic"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_spec(cmd: &str, name: &str) -> (i32, Value) {
    let path = fixture(name);
    let out = run(&[cmd, "--spec", path.to_str().unwrap()]);
    let json = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), json)
}

#[test]
fn worked_example_canonical_block() {
    let (code, json) = run_spec("analyze", "worked_example.json");
    assert_eq!(code, 0);
    assert_eq!(json["canonical"]["G1"], "001000");
    assert_eq!(json["canonical"]["G2"], "000000");
    assert_eq!(json["d"], json["basis"].as_array().unwrap().len());
}

#[test]
fn zero_code_analysis() {
    let (code, json) = run_spec("analyze", "zero_code.json");
    assert_eq!(code, 0);
    assert_eq!(json["d"], 0);
    assert_eq!(json["size"], 1);
    assert!(json["min_distance"].is_null());
    assert_eq!(json["separable"], true);
}

#[test]
fn separable_instance() {
    let (code, json) = run_spec("analyze", "separable.json");
    assert_eq!(code, 0);
    assert_eq!(json["d"], 3);
    assert_eq!(json["min_distance"], 2);
    assert_eq!(json["separable"], true);

    let (code, json) = run_spec("dual", "separable.json");
    assert_eq!(code, 0);
    assert_eq!(json["checks"]["dual-product-form"], "holds");
    assert_eq!(json["d"].as_u64().unwrap() + json["dual_d"].as_u64().unwrap(), 6);
}

#[test]
fn g2_zero_dual_closed_form() {
    let (code, json) = run_spec("dual", "g2_zero.json");
    assert_eq!(code, 0);
    assert_eq!(json["checks"]["g2-zero-g3-closed-form"], "holds");
    assert_eq!(json["kappa"], 3);
    assert!(json["witnesses"].as_array().unwrap().is_empty());
}

#[test]
fn dual_that_is_not_three_generated_fails() {
    let (code, json) = run_spec("dual", "no_dual_triple.json");
    assert_eq!(code, 1);
    assert_eq!(json["checks"]["dual-single-triple"], "fails");
    assert_eq!(json["witnesses"][0]["check"], "dual-single-triple");
}

#[test]
fn malformed_specs_exit_2() {
    for name in ["bad_field.json", "truncated.json"] {
        for cmd in ["analyze", "dual"] {
            let path = fixture(name);
            let out = run(&[cmd, "--spec", path.to_str().unwrap()]);
            assert_eq!(out.status.code(), Some(2), "{cmd} {name}");
            assert!(out.stdout.is_empty());
        }
    }
    let out = run(&["analyze", "--spec", fixture("bad_field.json").to_str().unwrap()]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("`F2`"));
    let out = run(&["analyze", "--spec", fixture("truncated.json").to_str().unwrap()]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
}

#[test]
fn oversized_context_exits_3() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    write!(file, r#"{{"r": 60, "s": 60, "t": 60, "F1": "1", "F2": "1", "G1": "0", "G2": "0", "G3": "1"}}"#).unwrap();
    let out = run(&["analyze", "--spec", file.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn sweep_cap_exits_3() {
    let out = run(&["verify", "--rmax", "30"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(out.stdout.is_empty());
}

const SMALL: [&str; 7] = ["verify", "--rmax", "3", "--smax", "2", "--tmax", "3"];

#[test]
fn verify_is_byte_for_byte_reproducible() {
    let a = run(&SMALL);
    let b = run(&SMALL);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.status.code(), b.status.code());
    let report: SweepReport = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(serde_json::to_string_pretty(&report).unwrap() + "\n", String::from_utf8(a.stdout).unwrap());
    assert_eq!(report.config.seed, 0);
    assert_eq!(a.status.code(), Some(if report.failed() { 1 } else { 0 }));

    let reseeded = run(&[&SMALL[..], &["--seed", "9", "--gsample", "2"]].concat());
    let report: SweepReport = serde_json::from_slice(&reseeded.stdout).unwrap();
    assert_eq!(report.config.seed, 9);
}

#[test]
fn fail_fast_stops_at_the_first_witness() {
    let full: SweepReport = serde_json::from_slice(&run(&SMALL).stdout).unwrap();
    let fast_out = run(&[&SMALL[..], &["--fail-fast"]].concat());
    let fast: SweepReport = serde_json::from_slice(&fast_out.stdout).unwrap();
    assert_eq!(full.failed(), fast.stopped_early);
    assert_eq!(full.witnesses.first(), fast.witnesses.first());
    assert!(fast.specs <= full.specs);
}

#[test]
fn exhaustive_g_sampling_is_accepted() {
    let out = run(&["verify", "--rmax", "2", "--smax", "2", "--tmax", "2", "--gsample", "exhaustive"]);
    let report: SweepReport = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report.tally("cardinality").fails, 0);
    assert_eq!(report.tally("cardinality").holds, report.specs);
    let bad = run(&["verify", "--gsample", "some"]);
    assert_eq!(bad.status.code(), Some(2));
}
