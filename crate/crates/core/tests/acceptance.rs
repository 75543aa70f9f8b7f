//! Acceptance suite: one PASS/FAIL line per criterion, with its wall time
//! against the budget. Exits non-zero if any criterion fails.

mod common;

use std::time::{Duration, Instant};

use kz_core::ansatz::{check_conditions, residual, sample_points, solve_ansatz, span_contains, AnsatzShape};
use kz_core::cli::{scan_file, FunctionFile, EXIT_FAIL, EXIT_PASS};
use kz_core::exact::integer_eigenvalues;
use kz_core::frobenius::{exponent_window, laurent_of_rational, recursion_defects};
use kz_core::numeric::{monodromy, residual_scan};
use kz_core::s4::{independence_certificate, S4Coefficients};
use kz_core::symmetric::t_matrix;
use kz_core::KzSystem;

type Outcome = Result<String, String>;

/// Name, check and time budget in seconds.
type Criterion = (&'static str, fn() -> Outcome, u64);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn exact_solutions() -> Outcome {
    let mut rng = common::rng(1);
    for trial in 0..100 {
        let points = common::configuration(&mut rng);
        let sys = KzSystem::new(4, -1, points.clone()).map_err(|e| e.to_string())?;
        let samples = sample_points(&sys, AnsatzShape::default().certifying_samples(3));
        for (i, y) in common::closed_forms(&points).iter().enumerate() {
            let rep = check_conditions(&sys, y).map_err(|e| e.to_string())?;
            ensure(rep.passed(), || format!("trial {trial}: Y{} fails {:?}", i + 1, rep.failures()))?;
            for z in &samples {
                let r = residual(&sys, y, z).map_err(|e| e.to_string())?;
                ensure(r.is_zero(), || format!("trial {trial}: Y{} residual at {z}", i + 1))?;
            }
        }
    }
    Ok("100 configurations x 4 solutions, exact zero".into())
}

fn spectrum() -> Outcome {
    for n in 3..=8usize {
        let eig = integer_eigenvalues(t_matrix(n).map_err(|e| e.to_string())?.matrix()).map_err(|e| e.to_string())?;
        let n = n as i64;
        for want in [n - 1, n - 2, -1] {
            ensure(eig.iter().any(|&(e, _)| e == want), || format!("n={n}: {want} missing from {eig:?}"))?;
        }
        ensure(eig.first().map(|e| e.0) == Some(-1), || format!("n={n}: min {eig:?}"))?;
        ensure(eig.last().map(|e| e.0) == Some(n - 1), || format!("n={n}: max {eig:?}"))?;
        let total: usize = eig.iter().map(|e| e.1).sum();
        ensure(total as i64 == n, || format!("n={n}: multiplicities sum to {total}"))?;
    }
    Ok("n = 3..8".into())
}

fn beta_identities() -> Outcome {
    let mut rng = common::rng(3);
    for trial in 0..100 {
        let points = common::configuration(&mut rng);
        let coeffs = S4Coefficients::new(&points).map_err(|e| e.to_string())?;
        let ids = coeffs.beta_identities(&points).map_err(|e| e.to_string())?;
        ensure(ids.iter().all(|v| v.is_zero()), || format!("trial {trial}: {ids:?}"))?;
    }
    Ok("100 configurations, exact zero".into())
}

fn local_series() -> Outcome {
    let mut rng = common::rng(4);
    let mut configs = vec![common::ints(&[0, 1, 2])];
    configs.extend((0..4).map(|_| common::configuration(&mut rng)));
    for points in configs {
        let sys = KzSystem::new(4, -1, points.clone()).map_err(|e| e.to_string())?;
        for k in 0..3 {
            let w = exponent_window(&sys, k).map_err(|e| e.to_string())?;
            ensure(w == (-1, 1), || format!("window at pole {} is {w:?}", k + 1))?;
            for (i, y) in common::closed_forms(&points).iter().enumerate() {
                let s = laurent_of_rational(y, k, 4).map_err(|e| e.to_string())?;
                let d = recursion_defects(&sys, &s).map_err(|e| e.to_string())?;
                ensure(d.iter().all(|(_, v)| v.is_zero()), || format!("Y{} at pole {}", i + 1, k + 1))?;
            }
        }
    }
    Ok("5 configurations x 3 poles x 4 solutions through order 4".into())
}

fn fundamentality() -> Outcome {
    let mut rng = common::rng(5);
    for trial in 0..100 {
        let points = common::configuration(&mut rng);
        let cert = independence_certificate(&points).map_err(|e| format!("trial {trial}: {e}"))?;
        ensure(!cert.determinant.is_zero(), || format!("trial {trial}: zero determinant"))?;
        let sys = KzSystem::new(4, -1, points.clone()).map_err(|e| e.to_string())?;
        let basis = solve_ansatz(&sys, AnsatzShape::default()).map_err(|e| e.to_string())?;
        ensure(basis.len() == 4, || format!("trial {trial}: dimension {}", basis.len()))?;
        for (i, y) in common::closed_forms(&points).iter().enumerate() {
            ensure(span_contains(&basis, y).map_err(|e| e.to_string())?, || {
                format!("trial {trial}: Y{} outside the solver span", i + 1)
            })?;
        }
    }
    Ok("100 configurations: nonzero determinant, dimension 4, span membership".into())
}

fn monodromy_trivial() -> Outcome {
    let sys = KzSystem::new(4, -1, common::ints(&[0, 1, 2])).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for k in 0..3 {
        let r = monodromy(&sys, k, 0.4, 1e-12).map_err(|e| e.to_string())?;
        ensure(r.deviation < 1e-8, || format!("pole {}: deviation {:e}", k + 1, r.deviation))?;
        worst = worst.max(r.deviation);
    }
    Ok(format!("max deviation {worst:.2e}"))
}

fn negative_controls() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let points = common::ints(&[0, 1, 2]);
    let sys = KzSystem::new(4, -1, points.clone()).map_err(|e| e.to_string())?;
    let mut cases = 0;
    for (which, y) in common::closed_forms(&points).iter().enumerate() {
        for k in 0..3 {
            for i in 0..4 {
                let bad = common::corrupt_residue(y, k, i);
                let rep = check_conditions(&sys, &bad).map_err(|e| e.to_string())?;
                let residue_failed = rep.residue_eigen.iter().chain(&rep.residue_balance).any(|v| !v.is_zero());
                ensure(residue_failed, || format!("Y{} k={} i={i}: conditions still hold", which + 1, k + 1))?;
                let scan = residual_scan(&sys, &bad, 64);
                ensure(scan > 0.1, || format!("Y{} k={} i={i}: scan {scan:e}", which + 1, k + 1))?;
                let path = dir.path().join(format!("bad-{which}-{k}-{i}.json"));
                let text = serde_json::to_string(&FunctionFile::new(&sys, &bad)).map_err(|e| e.to_string())?;
                std::fs::write(&path, text).map_err(|e| e.to_string())?;
                let (_, _, code) = common::run_cli(&["verify", "--solution", &format!("file:{}", path.display())]);
                ensure(code == EXIT_FAIL, || format!("Y{} k={} i={i}: exit code {code}", which + 1, k + 1))?;
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} single-entry corruptions rejected"))
}

fn cli_round_trip() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let d = dir.path().to_str().ok_or("non-UTF-8 temp dir")?;
    let args = ["nullspace", "--n", "4", "--rho", "-1", "--points", "0,1,(2,1/3)", "--emit", d];
    let (first, _, code) = common::run_cli(&args);
    ensure(code == EXIT_PASS, || format!("nullspace exit {code}"))?;
    let (second, _, _) = common::run_cli(&args);
    ensure(first == second, || "nullspace reports differ between runs".into())?;
    let mut files = 0;
    for i in 0..4 {
        let path = dir.path().join(format!("basis-{i}.json"));
        let sel = format!("file:{}", path.display());
        let a = common::run_cli(&["verify", "--solution", &sel]);
        let b = common::run_cli(&["verify", "--solution", &sel]);
        ensure(a.2 == EXIT_PASS, || format!("basis-{i}: exit {}", a.2))?;
        ensure(a.0 == b.0, || format!("basis-{i}: verify reports differ"))?;
        let scan = scan_file(&path, 32).map_err(|e| e.to_string())?;
        ensure(scan < 1e-10, || format!("basis-{i}: scan {scan:e}"))?;
        files += 1;
    }
    Ok(format!("{files} basis files verified, reports byte-identical"))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 exact solution verification", exact_solutions, 10),
        ("2 spectrum of T", spectrum, 1),
        ("3 beta identities", beta_identities, 1),
        ("4 local series consistency", local_series, 5),
        ("5 fundamentality", fundamentality, 30),
        ("6 monodromy", monodromy_trivial, 10),
        ("7 negative controls", negative_controls, 5),
        ("8 CLI round trip", cli_round_trip, 5),
    ];
    let mut failed = 0;
    for (name, check, budget) in criteria {
        let t = Instant::now();
        let outcome = check();
        let elapsed = t.elapsed();
        let over = elapsed > Duration::from_secs(budget);
        let (verdict, detail) = match (&outcome, over) {
            (Ok(d), false) => ("PASS", d.clone()),
            (Ok(d), true) => ("FAIL", format!("{d}; over budget")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if verdict == "FAIL" {
            failed += 1;
        }
        println!("[PRIMARY] {verdict} {name} ({:.2}s / {budget}s): {detail}", elapsed.as_secs_f64());
    }
    println!("acceptance: {} of 8 passed", 8 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
