mod common;

use fried_torsion::report::{GlueReport, SuiteReport, CSV_HEADER, EXIT_FAIL, EXIT_PASS, EXIT_USAGE};
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(common::bin()).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn rows(csv: &str) -> Vec<Vec<f64>> {
    csv.lines().skip(1).map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect()
}

fn hand_path() -> String {
    format!("{}/examples/data/hand_complex.json", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn verify_detline_passes() {
    let o = run(&["verify", "--suite", "detline", "--seed", "42", "--trials", "200"]);
    assert_eq!(code(&o), EXIT_PASS, "{}", String::from_utf8_lossy(&o.stdout));
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["suite"], "detline");
    assert_eq!(report["seed"], 42);
    assert!(report["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
}

#[test]
fn unknown_suite_is_a_usage_error() {
    let o = run(&["verify", "--suite", "bogus"]);
    assert_eq!(code(&o), EXIT_USAGE);
    assert!(o.stdout.is_empty());
    assert_eq!(code(&run(&["frobnicate"])), EXIT_USAGE);
    assert_eq!(code(&run(&["--help"])), EXIT_PASS);
}

#[test]
fn impossible_tolerance_fails_the_suite() {
    let o = run(&["verify", "--suite", "fried", "--tolerance", "R(2) ≈ 0.8190=1e-9"]);
    assert_eq!(code(&o), EXIT_FAIL);
    let report: SuiteReport = serde_json::from_slice(&o.stdout).unwrap();
    let rec = report.checks.iter().find(|c| c.anchor == "R(2) ≈ 0.8190").unwrap();
    assert!(!rec.pass && rec.tolerance == 1e-9);
    assert_eq!(code(&run(&["verify", "--suite", "fried", "--tolerance", "nonsense"])), EXIT_USAGE);
}

#[test]
fn verify_reports_are_byte_identical() {
    let a = run(&["verify", "--suite", "spectral", "--seed", "3", "--trials", "10"]);
    let b = run(&["verify", "--suite", "spectral", "--seed", "3", "--trials", "10"]);
    assert_eq!(code(&a), EXIT_PASS);
    assert_eq!(a.stdout, b.stdout);
    let c = run(&["verify", "--suite", "spectral", "--seed", "4", "--trials", "10"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn timing_is_opt_in() {
    let plain = run(&["verify", "--suite", "fried"]);
    assert!(!String::from_utf8_lossy(&plain.stdout).contains("wall_time_s"));
    let timed = run(&["verify", "--suite", "fried", "--timing"]);
    assert!(String::from_utf8_lossy(&timed.stdout).contains("wall_time_s"));
}

#[test]
fn zeta_csv_columns_and_agreement() {
    let o = run(&["zeta", "--matrix", "2,1,1,1", "--sigma", "1.5:3.0:0.1", "--K", "60"]);
    assert_eq!(code(&o), EXIT_PASS);
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().next().unwrap(), CSV_HEADER);
    let r = rows(&text);
    assert_eq!(r.len(), 16);
    for row in &r {
        assert_eq!(row.len(), 9);
        assert_eq!(row[2], 60.0);
        assert!(row[8] <= 1e-8, "{row:?}");
        assert!((row[3] - common::closed_form_oracle(3.0, row[0])).abs() <= 1e-8);
    }
    let first = text.lines().nth(1).unwrap();
    let mantissa = first.split(',').nth(3).unwrap().split('e').next().unwrap();
    assert_eq!(mantissa.trim_start_matches('-').replace('.', "").len(), 17);
}

#[test]
fn zeta_twist_is_a_shift_in_sigma() {
    let twisted = rows(&String::from_utf8(run(&["zeta", "--theta", "0.7", "--sigma", "2,2.5"]).stdout).unwrap());
    let shifted = rows(&String::from_utf8(run(&["zeta", "--sigma", "2-0.7i,2.5-0.7i"]).stdout).unwrap());
    for (a, b) in twisted.iter().zip(&shifted) {
        let scale = a[3].hypot(a[4]);
        assert!((a[3] - b[3]).hypot(a[4] - b[4]) <= 1e-12 * scale, "{a:?} vs {b:?}");
    }
}

#[test]
fn zeta_rejects_non_hyperbolic_matrices() {
    let o = run(&["zeta", "--matrix", "1,1,0,1"]);
    assert_eq!(code(&o), EXIT_USAGE);
    assert!(String::from_utf8_lossy(&o.stderr).contains("hyperbolic"));
    assert_eq!(code(&run(&["zeta", "--matrix", "1,2,3"])), EXIT_USAGE);
}

#[test]
fn zeta_writes_to_a_file() {
    let path = std::env::temp_dir().join(format!("fried-torsion-zeta-{}.csv", std::process::id()));
    let o = run(&["zeta", "--sigma", "2", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&o), EXIT_PASS);
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert_eq!(rows(&text).len(), 1);
}

#[test]
fn glue_on_the_hand_model() {
    let o = run(&["glue", "--input", &hand_path(), "--cutoffs", "1,10"]);
    assert_eq!(code(&o), EXIT_PASS);
    let r: GlueReport = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r.spread, 0.0);
    for e in &r.entries {
        assert_eq!(e.value.unwrap()[0], 1.0 / 6.0);
    }
}

#[test]
fn glue_reports_cutoffs_on_the_spectrum() {
    let o = run(&["glue", "--input", &hand_path(), "--cutoffs", "1,6"]);
    assert_eq!(code(&o), EXIT_FAIL);
    let r: GlueReport = serde_json::from_slice(&o.stdout).unwrap();
    assert!(r.entries[1].error.as_deref().unwrap().contains("cutoff"));
}

#[test]
fn glue_on_random_dims() {
    let o = run(&["glue", "--dims", "1,3,3,1", "--cutoffs", "0.01,1,100,1e6", "--seed", "5"]);
    assert_eq!(code(&o), EXIT_PASS, "{}", String::from_utf8_lossy(&o.stdout));
    assert_eq!(code(&run(&["glue", "--dims", "2,1"])), EXIT_USAGE);
    assert_eq!(code(&run(&["glue", "--cutoffs", "1"])), EXIT_USAGE);
}
