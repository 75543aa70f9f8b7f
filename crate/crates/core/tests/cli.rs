//! End-to-end runs of the `kz` command surface.

mod common;

use common::run_cli;
use kz_core::cli::{scan_file, FunctionFile, EXIT_FAIL, EXIT_PASS, EXIT_USAGE};
use kz_core::{s4, KzSystem};
use serde_json::Value;

const SYS: [&str; 6] = ["--n", "4", "--rho", "-1", "--points", "0,1,2"];

fn with_sys(head: &[&str], tail: &[&str]) -> Vec<String> {
    head.iter().chain(SYS.iter()).chain(tail.iter()).map(|s| s.to_string()).collect()
}

fn run_owned(args: &[String]) -> (String, String, i32) {
    let refs: Vec<&str> = args.iter().map(String::as_str).collect();
    run_cli(&refs)
}

#[test]
fn emitted_basis_round_trips_through_verify() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let (out, _, code) = run_owned(&with_sys(&["nullspace"], &["--emit", d]));
    assert_eq!(code, EXIT_PASS, "{out}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["data"]["dimension"], 4);
    assert_eq!(v["data"]["fundamental"], true);
    for i in 0..4 {
        let path = dir.path().join(format!("basis-{i}.json"));
        let sel = format!("file:{}", path.display());
        let (out, _, code) = run_cli(&["verify", "--solution", &sel]);
        assert_eq!(code, EXIT_PASS, "{out}");
        assert!(scan_file(&path, 32).unwrap() < 1e-10);
    }
}

#[test]
fn exact_reports_are_byte_identical() {
    for args in [
        with_sys(&["verify"], &["--solution", "all"]),
        with_sys(&["nullspace"], &[]),
        with_sys(&["series"], &["--pole", "2", "--order", "3"]),
    ] {
        let a = run_owned(&args);
        let b = run_owned(&args);
        assert_eq!(a.0, b.0);
        assert!(!a.0.contains("timing_ms"));
    }
}

#[test]
fn corrupted_file_fails_and_names_the_condition() {
    let dir = tempfile::tempdir().unwrap();
    let sys = KzSystem::new(4, -1, common::ints(&[0, 1, 2])).unwrap();
    let bad = common::corrupt_residue(&s4::y1(sys.points()).unwrap(), 0, 0);
    let path = dir.path().join("bad.json");
    std::fs::write(&path, serde_json::to_string(&FunctionFile::new(&sys, &bad)).unwrap()).unwrap();
    let sel = format!("file:{}", path.display());
    let (out, err, code) = run_cli(&["verify", "--solution", &sel]);
    assert_eq!(code, EXIT_FAIL);
    assert!(err.contains("residue-eigen k=1"), "{err}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["pass"], false);
    assert!(scan_file(&path, 32).unwrap() > 0.1);
}

#[test]
fn series_reports_the_expected_leading_coefficient() {
    let (out, _, code) = run_owned(&with_sys(&["series"], &["--pole", "1", "--order", "3"]));
    assert_eq!(code, EXIT_PASS, "{out}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["data"]["window"], serde_json::json!([-1, 1]));
    // the residue of Y₁ at z₁ must be a combination of the b₋₁ directions;
    // it appears directly because the basis is reduced
    let b: Vec<Vec<String>> = v["data"]["basis"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|s| s["lowest"] == -1)
        .map(|s| s["coefficients"][0].as_array().unwrap().iter().map(|x| x.as_str().unwrap().to_string()).collect())
        .collect();
    assert_eq!(b.len(), 3);
    let vecs: Vec<kz_core::Vector> = b
        .iter()
        .map(|c| kz_core::Vector(c.iter().map(|x| x.parse().unwrap()).collect()))
        .collect();
    let target = kz_core::Vector::from_ints(&[1, 1, -1, -1]);
    let m = kz_core::Matrix::from_columns(&vecs);
    assert!(kz_core::exact::solve_affine(&m, &target).unwrap().is_consistent());
}

#[test]
fn monodromy_command() {
    let (out, _, code) = run_owned(&with_sys(&["monodromy"], &["--pole", "2", "--radius", "0.4", "--tol", "1e-12"]));
    assert_eq!(code, EXIT_PASS, "{out}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert!(v["data"]["deviation"].as_f64().unwrap() < 1e-8);
    assert!(v["timing_ms"].is_number());
    // a radius that swallows another pole is rejected
    assert_eq!(run_owned(&with_sys(&["monodromy"], &["--pole", "2", "--radius", "1.5"])).2, EXIT_USAGE);
}

#[test]
fn nullspace_beyond_rho_minus_one_is_marked_experimental() {
    let (out, _, code) = run_cli(&["nullspace", "--n", "4", "--rho", "-5", "--points", "0,1,2", "--pole-order", "5", "--poly-degree", "5"]);
    assert_eq!(code, EXIT_PASS, "{out}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["data"]["experimental"], true);
    for f in v["data"]["basis"].as_array().unwrap() {
        assert_eq!(f["rho"], -5);
    }
}
