//! Acceptance run: one pass/fail line per criterion, exact comparison
//! throughout. `cargo test --test acceptance -- --nocapture` shows the lines.

mod common;

use std::time::Instant;

use rayon::prelude::*;

use conifold_mirror::algebra::{rat, Rational};
use conifold_mirror::checks::{
    check_airy, check_annulus_q0, check_disk, check_graphsum, check_rmatrix, check_v_routes, CheckReport,
};
use conifold_mirror::curve::spectral::SpectralCurveModel;
use conifold_mirror::curve::KnotParams;
use conifold_mirror::recursion::eo::{eo_local_prec, EoSolver};
use conifold_mirror::Result;

use common::TUPLES;

fn kp(p: i64, r: i64, s: i64) -> KnotParams {
    KnotParams::new(p, r, s).unwrap()
}

/// Folds a batch of reports into one verdict, naming every failure.
fn verdict(reports: Vec<Result<CheckReport>>) -> std::result::Result<String, String> {
    let mut failures = Vec::new();
    let n = reports.len();
    for r in reports {
        match r {
            Ok(r) if r.passed() => {}
            Ok(r) => failures.push(r.summary()),
            Err(e) => failures.push(e.to_string()),
        }
    }
    if failures.is_empty() {
        Ok(format!("{n} cases"))
    } else {
        Err(failures.join("; "))
    }
}

fn criterion_1() -> std::result::Result<String, String> {
    verdict(
        TUPLES
            .par_iter()
            .map(|&(p, r, s)| check_disk(&kp(p, r, s), 3, 3))
            .collect(),
    )
}

fn criterion_2() -> std::result::Result<String, String> {
    verdict(
        TUPLES
            .par_iter()
            .map(|&(p, r, s)| check_v_routes(&kp(p, r, s), 3, 3 * r as u32))
            .collect(),
    )
}

fn criterion_3() -> std::result::Result<String, String> {
    let q = rat(1, 7);
    let cases = [(0u32, 3usize), (0, 4), (1, 1), (1, 2), (2, 1)];
    verdict(
        cases
            .par_iter()
            .map(|&(g, n)| check_graphsum(&kp(1, 1, 1), g, n, &q))
            .collect(),
    )
}

fn criterion_4() -> std::result::Result<String, String> {
    let cases = [(0u32, 3usize), (0, 4), (0, 5), (1, 1), (1, 2), (1, 3), (2, 1), (2, 2)];
    let table = verdict(cases.par_iter().map(|&(g, n)| check_airy(g, n)).collect())?;
    // the two anchor values, read straight off the recursion with weight 2^{g-1}
    let anchor = |g: u32, n: usize, key: Vec<(usize, usize)>, expect: Rational| {
        let m = SpectralCurveModel::airy(eo_local_prec(g, n));
        let w = EoSolver::new(&m)
            .omega(g, n)
            .and_then(|w| w.to_theta())
            .map_err(|e| e.to_string())?;
        let got = w.coeff(&key);
        if got == expect {
            Ok(())
        } else {
            Err(format!("({g},{n}) coefficient {got}, expected {expect}"))
        }
    };
    anchor(0, 3, vec![(0, 0); 3], rat(1, 2))?;
    anchor(1, 1, vec![(0, 1)], rat(1, 24))?;
    Ok(table + ", <tau_0^3>_0 = 1, <tau_1>_1 = 1/24")
}

fn criterion_5() -> std::result::Result<String, String> {
    let a = verdict(
        [(1, 1, 1), (2, 3, 1), (3, 1, 2), (5, 2, 3)]
            .par_iter()
            .map(|&(p, r, s)| check_rmatrix(&kp(p, r, s), 5))
            .collect(),
    )?;
    let b = verdict(vec![check_rmatrix(&kp(1, 1, 1), 4)])?;
    Ok(format!("unitarity {a}, limit match {b}"))
}

fn criterion_6() -> std::result::Result<String, String> {
    verdict(vec![check_annulus_q0(&kp(1, 1, 1), 3, 3)])
}

fn criterion_7() -> std::result::Result<String, String> {
    let failures: Vec<String> = common::SUITES
        .par_iter()
        .filter_map(|(name, suite)| suite().err().map(|e| format!("{name}: {e}")))
        .collect();
    if failures.is_empty() {
        Ok(format!("{} suites x {} cases", common::SUITES.len(), common::CASES))
    } else {
        Err(failures.join("; "))
    }
}

#[test]
fn acceptance() {
    type Criterion = fn() -> std::result::Result<String, String>;
    let criteria: [(u32, &str, Criterion); 7] = [
        (1, "disk mirror identity", criterion_1),
        (2, "v-series double route", criterion_2),
        (3, "graph sum equals recursion", criterion_3),
        (4, "Airy closed loop", criterion_4),
        (5, "R-matrix limit", criterion_5),
        (6, "annulus at q = 0", criterion_6),
        (7, "property suites", criterion_7),
    ];
    let results: Vec<_> = criteria
        .par_iter()
        .map(|(i, name, f)| {
            let t = Instant::now();
            (*i, *name, f(), t.elapsed())
        })
        .collect();
    let mut ok = true;
    for (i, name, res, dt) in results {
        match res {
            Ok(detail) => println!("criterion {i} ({name}): PASS [{detail}] in {:.1} s", dt.as_secs_f64()),
            Err(why) => {
                ok = false;
                println!("criterion {i} ({name}): FAIL {why}");
            }
        }
    }
    assert!(ok, "acceptance criteria failed");
}
