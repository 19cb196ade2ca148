//! Randomized property suites shared by the standalone property tests and
//! the acceptance run.

#![allow(dead_code)]

use conifold_mirror::algebra::cyclo::Cyclo;
use conifold_mirror::algebra::series::{Series, SeriesRing};
use conifold_mirror::algebra::{int, rat, Rational, Ring, VLaurent};
use conifold_mirror::amodel::{
    disk_potential_via_j, mirror_map, phi_series, r_matrix_limit, CharacterTable, OrbifoldChartData,
};
use conifold_mirror::curve::genus0::ConifoldCurve;
use conifold_mirror::curve::mirror::{h_project, h_project_by_average};
use conifold_mirror::curve::spectral::with_escalation;
use conifold_mirror::curve::theta::FormExpander;
use conifold_mirror::curve::KnotParams;
use conifold_mirror::recursion::dvv::intersection;
use conifold_mirror::recursion::eo::{eo_local_prec, EoSolver};
use conifold_mirror::Error;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

pub const CASES: u32 = 24;

pub const TUPLES: [(i64, i64, i64); 5] = [(1, 1, 1), (1, 2, 1), (2, 3, 1), (3, 1, 2), (5, 2, 3)];

fn run<S: Strategy>(strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String>
where
    S::Value: std::fmt::Debug,
{
    let mut runner = TestRunner::new(Config {
        cases: CASES,
        failure_persistence: None,
        ..Config::default()
    });
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

fn tc(e: Error) -> TestCaseError {
    TestCaseError::fail(e.to_string())
}

fn random_series() -> impl Strategy<Value = Vec<(u32, u32, i64)>> {
    proptest::collection::vec((0u32..8, 0u32..8, -6i64..7), 0..20)
}

fn build(terms: &[(u32, u32, i64)]) -> Series<Rational> {
    let ring = SeriesRing::new(&["eta1", "eta2"], &[8, 8]).build();
    let mut f = Series::zero(&ring);
    for &(a, b, c) in terms {
        f.add_term(vec![a, b], int(c));
    }
    f
}

/// The eta projector is idempotent, commutes across variables and agrees
/// with the literal root-of-unity average.
pub fn h_projector() -> Result<(), String> {
    run((random_series(), 1i64..6), |(terms, r)| {
        let f = build(&terms);
        let h1 = h_project(&f, r, &[0]);
        prop_assert_eq!(&h_project(&h1, r, &[0]), &h1);
        let h2 = h_project(&f, r, &[1]);
        prop_assert_eq!(h_project(&h1, r, &[1]), h_project(&h2, r, &[0]));
        prop_assert_eq!(h_project(&f, r, &[0, 1]), h_project(&h1, r, &[1]));
        prop_assert_eq!(&h_project_by_average(&f, r, 0), &h1);
        prop_assert_eq!(&h_project_by_average(&f, r, 1), &h2);
        Ok(())
    })
}

/// omega_{0,3} is symmetric and the theta forms have no residue at their pole,
/// on random p = 1 curves.
pub fn omega_symmetry_residues() -> Result<(), String> {
    let strategy = (1i64..4, 1i64..4, 1i64..12, 2i64..12, 0usize..3);
    run(strategy, |(r, s, a, b, d)| {
        let params = match KnotParams::new(1, r, s) {
            Ok(p) => p,
            Err(_) => return Ok(()),
        };
        let curve = match ConifoldCurve::new(params, rat(a, b)) {
            Ok(c) => c,
            Err(Error::Degenerate(_)) => return Ok(()),
            Err(e) => return Err(tc(e)),
        };
        let start = eo_local_prec(0, 3);
        let w = with_escalation(start, 8 * start, |prec| {
            EoSolver::new(&curve.model(prec)?).omega(0, 3)?.to_theta()
        })
        .map_err(tc)?;
        prop_assert!(w.is_symmetric());
        prop_assert!(!w.terms.is_empty());
        let model = curve.model(2 * d as i64 + 8).map_err(tc)?;
        let fx = FormExpander::new(&model);
        for s in 0..model.n_points() {
            let th = fx.theta_at(s, s, d).map_err(tc)?;
            prop_assert!(
                th.coeff(-1).map_err(tc)?.is_zero(),
                "residue of theta^{} at point {}",
                d,
                s
            );
        }
        Ok(())
    })
}

/// `Phi_{a+1} = (1/v) X d/dX Phi_a`.
pub fn phi_ladder() -> Result<(), String> {
    run((0usize..5, -2i64..4, 0usize..5, 1u32..7), |(idx, a, sector, xo)| {
        let (p, r, s) = TUPLES[idx];
        let params = KnotParams::new(p, r, s).map_err(tc)?;
        let j = sector % p as usize;
        let f = phi_series(&params, j, a, xo).map_err(tc)?;
        let g = phi_series(&params, j, a + 1, xo).map_err(tc)?;
        let vinv = VLaurent::monomial(int(1), -1);
        prop_assert_eq!(f.map(|e, c| c.scale(&int(e[0] as i64)).mul_ref(&vinv)), g);
        Ok(())
    })
}

/// `tau_a = q_a + O(q^2)`.
pub fn mirror_map_leading() -> Result<(), String> {
    let table = [(2, 3, 1), (3, 1, 2), (5, 2, 3), (3, 2, 1), (4, 1, 3), (2, 1, 1)];
    run((0usize..table.len(), 1u32..4), move |(idx, order)| {
        let (p, r, s) = table[idx];
        let params = KnotParams::new(p, r, s).map_err(tc)?;
        let taus = mirror_map(&params, order);
        prop_assert_eq!(taus.len(), p as usize - 1);
        for (i, t) in taus.iter().enumerate() {
            let mut e = vec![0u32; p as usize];
            e[i + 1] = 1;
            let rest = t.sub(&Series::monomial(t.ring(), e, int(1))).map_err(tc)?;
            prop_assert!(rest.terms().keys().all(|e| e.iter().sum::<u32>() >= 2), "tau_{}", i + 2);
        }
        Ok(())
    })
}

fn stable_input() -> impl Strategy<Value = (u32, Vec<u32>)> {
    (0u32..4, 1usize..6).prop_flat_map(|(g, n)| {
        let n = if 3 * g as i64 - 3 + (n as i64) < 0 { 3 } else { n };
        let dim = (3 * g as i64 - 3 + n as i64) as u32;
        proptest::collection::vec(0..=dim, n).prop_map(move |mut v| {
            // spread dim over the slots greedily so the sum matches
            let mut left = dim;
            for x in v.iter_mut() {
                *x = (*x).min(left);
                left -= *x;
            }
            *v.last_mut().expect("n >= 1") += left;
            (g, v)
        })
    })
}

/// `<tau_0 prod tau_{k_i}>_g = sum_j <... tau_{k_j - 1} ...>_g`.
pub fn string_equation() -> Result<(), String> {
    run(stable_input(), |(g, ks)| {
        if g == 0 && ks.len() < 3 {
            return Ok(());
        }
        let mut with0 = ks.clone();
        with0.push(0);
        let mut rhs = int(0);
        for j in 0..ks.len() {
            if ks[j] > 0 {
                let mut v = ks.clone();
                v[j] -= 1;
                rhs += intersection(g, &v);
            }
        }
        prop_assert_eq!(intersection(g, &with0), rhs);
        Ok(())
    })
}

/// `(1/p) sum_h chi_a(h) chi_b(h^{-1}) = delta_ab`, and the R limit starts at the identity.
pub fn character_orthogonality() -> Result<(), String> {
    run((0usize..5, 0usize..8, 0usize..8), |(idx, a, b)| {
        let (p, r, s) = TUPLES[idx];
        let ch = CharacterTable { p: p as usize };
        let (a, b) = (a % p as usize, b % p as usize);
        let expect = if a == b { Cyclo::one() } else { Cyclo::zero() };
        prop_assert_eq!(ch.inner(a, b), expect.clone());
        let chart = OrbifoldChartData::new(&KnotParams::new(p, r, s).map_err(tc)?);
        let rl = r_matrix_limit(&chart, 1).map_err(tc)?;
        prop_assert_eq!(rl.coeff(a, b, 0), expect);
        Ok(())
    })
}

/// Every coefficient of the disk potential is free of `v`.
pub fn disk_v_cancellation() -> Result<(), String> {
    run((0usize..5, 0u32..3, 1u32..4), |(idx, qo, xo)| {
        let (p, r, s) = TUPLES[idx];
        let params = KnotParams::new(p, r, s).map_err(tc)?;
        let f = disk_potential_via_j(&params, qo, xo).map_err(tc)?;
        for (e, c) in f.terms() {
            prop_assert!(c.as_constant().is_some(), "v survives at {:?}: {:?}", e, c);
        }
        Ok(())
    })
}

pub const SUITES: [(&str, fn() -> Result<(), String>); 7] = [
    ("h projector", h_projector),
    ("omega symmetry and residues", omega_symmetry_residues),
    ("phi ladder", phi_ladder),
    ("mirror map leading term", mirror_map_leading),
    ("string equation", string_equation),
    ("character orthogonality", character_orthogonality),
    ("disk v-cancellation", disk_v_cancellation),
];
