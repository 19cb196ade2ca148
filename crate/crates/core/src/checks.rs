//! Coefficient-wise verification of the mirror identities, with
//! machine-readable reports.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::series::Series;
use crate::algebra::{int, Rational, Ring};
use crate::amodel::annulus::{annulus_q0, x_euler};
use crate::amodel::disk::disk_potential_a;
use crate::amodel::{r_matrix_limit, OrbifoldChartData};
use crate::curve::genus0::{conifold_q0_model, ConifoldCurve, K};
use crate::curve::mirror::{disk_b_side, MirrorCurve, Orders};
use crate::curve::spectral::with_escalation;
use crate::curve::theta::{r_check_local_prec, r_check_matrix, FormExpander};
use crate::curve::{KnotParams, SpectralCurveModel, VRoute};
use crate::recursion::dvv::intersection;
use crate::recursion::eo::{eo_local_prec, EoSolver, ThetaExpansion};
use crate::recursion::graphsum::{first_difference, graph_sum_b, GraphSumData};
use crate::recursion::potential::annulus_b_side_q0;
use crate::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub monomial: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub params: BTreeMap<String, Value>,
    pub status: Status,
    pub first_mismatch: Option<Mismatch>,
    pub elapsed_ms: u64,
}

impl CheckReport {
    fn finish(check: &str, params: BTreeMap<String, Value>, mismatch: Option<Mismatch>, start: Instant) -> Self {
        CheckReport {
            check: check.into(),
            params,
            status: if mismatch.is_none() { Status::Pass } else { Status::Fail },
            first_mismatch: mismatch,
            elapsed_ms: start.elapsed().as_millis() as u64,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// One-line human summary.
    pub fn summary(&self) -> String {
        match &self.first_mismatch {
            None => format!("{}: pass ({} ms)", self.check, self.elapsed_ms),
            Some(m) => format!(
                "{}: FAIL at {}: {} != {} ({} ms)",
                self.check, m.monomial, m.lhs, m.rhs, self.elapsed_ms
            ),
        }
    }
}

fn knot_params(params: &KnotParams) -> BTreeMap<String, Value> {
    BTreeMap::from([
        ("p".to_string(), json!(params.p)),
        ("r".to_string(), json!(params.r)),
        ("s".to_string(), json!(params.s)),
    ])
}

fn monomial_name(vars: &[String], e: &[u32]) -> String {
    let parts: Vec<String> = vars
        .iter()
        .zip(e)
        .filter(|(_, &x)| x > 0)
        .map(|(v, x)| format!("{v}^{x}"))
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

/// First monomial (in exponent order) where two series differ.
pub fn first_series_mismatch<C: Ring>(a: &Series<C>, b: &Series<C>) -> Option<Mismatch> {
    if a.ring().vars() != b.ring().vars() {
        return Some(Mismatch {
            monomial: "<variables>".into(),
            lhs: a.ring().vars().join(","),
            rhs: b.ring().vars().join(","),
        });
    }
    let keys: std::collections::BTreeSet<&Vec<u32>> = a.terms().keys().chain(b.terms().keys()).collect();
    keys.into_iter().find_map(|e| {
        let (x, y) = (a.coeff(e), b.coeff(e));
        (x != y).then(|| Mismatch {
            monomial: monomial_name(a.ring().vars(), e),
            lhs: x.to_string(),
            rhs: y.to_string(),
        })
    })
}

fn theta_mismatch<F: Ring>(a: &ThetaExpansion<F>, b: &ThetaExpansion<F>) -> Option<Mismatch> {
    first_difference(a, b).map(|(k, x, y)| Mismatch {
        monomial: k
            .iter()
            .map(|(s, d)| format!("theta^{d}_{s}"))
            .collect::<Vec<_>>()
            .join("*"),
        lhs: x.to_string(),
        rhs: y.to_string(),
    })
}

/// `F_{0,1}(tau(q); X) = -r h(W_{0,1})` with `X = eta^r`, through total
/// `q`-degree `q_order` and `X`-degree `x_order`.
pub fn check_disk(params: &KnotParams, q_order: u32, x_order: u32) -> Result<CheckReport> {
    let start = Instant::now();
    let a = disk_potential_a(params, q_order, x_order);
    let b = disk_b_side(
        params,
        Orders {
            q: q_order,
            eta: params.r as u32 * x_order,
        },
        VRoute::Newton,
    )?;
    let mut p = knot_params(params);
    p.insert("q_order".into(), json!(q_order));
    p.insert("x_order".into(), json!(x_order));
    Ok(CheckReport::finish("disk", p, first_series_mismatch(&a, &b), start))
}

/// Closed-form `v` series against the Newton solve of the curve.
pub fn check_v_routes(params: &KnotParams, q_order: u32, eta_order: u32) -> Result<CheckReport> {
    let start = Instant::now();
    let curve = MirrorCurve::new(*params);
    let o = Orders {
        q: q_order,
        eta: eta_order,
    };
    let a = curve.solve_v_series(o, VRoute::ClosedForm)?;
    let b = curve.solve_v_series(o, VRoute::Newton)?;
    let mut p = knot_params(params);
    p.insert("q_order".into(), json!(q_order));
    p.insert("eta_order".into(), json!(eta_order));
    Ok(CheckReport::finish("v-series", p, first_series_mismatch(&a, &b), start))
}

/// Graph sum with B-model weights against the recursion on the `p = 1`
/// curve at numeric `q1`.
pub fn check_graphsum(params: &KnotParams, g: u32, n: usize, q: &Rational) -> Result<CheckReport> {
    let start = Instant::now();
    let curve = ConifoldCurve::new(*params, q.clone())?;
    let prec = eo_local_prec(g, n).max(GraphSumData::<K>::local_prec(g, n));
    let (gs, eo) = with_escalation(prec, 8 * prec, |prec| {
        let m = curve.model(prec)?;
        let data = GraphSumData::new(&m, g, n)?;
        let gs = graph_sum_b(&data, g, n)?;
        let eo = EoSolver::new(&m).omega(g, n)?.to_theta()?;
        Ok((gs, eo))
    })?;
    let mut p = knot_params(params);
    p.insert("g".into(), json!(g));
    p.insert("n".into(), json!(n));
    p.insert("q".into(), json!(q.to_string()));
    Ok(CheckReport::finish("graphsum", p, theta_mismatch(&gs, &eo), start))
}

/// Recursion on `x = t^2, y = t` against `2^{g-1} <tau_{d_1} ... tau_{d_n}>_g`.
pub fn check_airy(g: u32, n: usize) -> Result<CheckReport> {
    let start = Instant::now();
    let m = SpectralCurveModel::airy(eo_local_prec(g, n));
    let eo = EoSolver::new(&m).omega(g, n)?.to_theta()?;
    let dim = (3 * g as usize + n).saturating_sub(3);
    let mut terms = BTreeMap::new();
    let scale = Rational::from_integer(num_bigint::BigInt::from(2).pow(g)) / int(2);
    for ds in compositions(dim, n) {
        let ks: Vec<u32> = ds.iter().map(|&d| d as u32).collect();
        let v = intersection(g, &ks) * &scale;
        if !v.is_zero() {
            terms.insert(ds.iter().map(|&d| (0, d)).collect(), v);
        }
    }
    let expect = ThetaExpansion { g, n, terms };
    let p = BTreeMap::from([("g".to_string(), json!(g)), ("n".to_string(), json!(n))]);
    Ok(CheckReport::finish("airy", p, theta_mismatch(&eo, &expect), start))
}

fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    (0..=total)
        .flat_map(|f| {
            compositions(total - f, parts - 1).into_iter().map(move |mut r| {
                r.insert(0, f);
                r
            })
        })
        .collect()
}

/// Unitarity of the `q -> 0` limit of the A-model `R`-matrix through `z^N`,
/// and for `p = 1` the comparison `R_check(-z)|_{q=0}` with that limit at `v = 1`.
pub fn check_rmatrix(params: &KnotParams, z_order: u32) -> Result<CheckReport> {
    let start = Instant::now();
    let chart = OrbifoldChartData::new(params);
    let rl = r_matrix_limit(&chart, z_order)?;
    let mut mismatch = rl.unitarity_defect().map(|(a, c, m, v)| Mismatch {
        monomial: format!("unitarity[{a}][{c}] z^{m}"),
        lhs: v.to_string(),
        rhs: "0".into(),
    });
    if mismatch.is_none() && params.p == 1 {
        let order = z_order as usize + 1;
        let rc = with_escalation(
            r_check_local_prec(order) + 4,
            8 * (r_check_local_prec(order) + 4),
            |prec| {
                let m = conifold_q0_model(*params, prec)?;
                r_check_matrix(&FormExpander::new(&m), order)
            },
        )?;
        mismatch = (0..order).find_map(|j| {
            let lhs = if j % 2 == 1 {
                rc.coeff(0, 0, j).neg_ref()
            } else {
                rc.coeff(0, 0, j)
            };
            let lim = rl
                .coeff(0, 0, j as u32)
                .as_rational()
                .expect("p = 1 entries are rational");
            let rhs = K::from_rational(&lim);
            (lhs != rhs).then(|| Mismatch {
                monomial: format!("z^{j}"),
                lhs: lhs.to_string(),
                rhs: rhs.to_string(),
            })
        });
    }
    let mut p = knot_params(params);
    p.insert("z_order".into(), json!(z_order));
    Ok(CheckReport::finish("rmatrix", p, mismatch, start))
}

/// `(X1 d1 + X2 d2)(-r^2 h W_{0,2})|_{q=0}` against the `xi`-product formula
/// at `v = 1`, for `X1^a X2^b` with `a <= o1`, `b <= o2`.
pub fn check_annulus_q0(params: &KnotParams, o1: u32, o2: u32) -> Result<CheckReport> {
    let start = Instant::now();
    let o = o1.max(o2);
    let box_ = |f: &Series<Rational>| f.filter(|e| e[0] <= o1 && e[1] <= o2);
    let a = box_(&annulus_q0(params, o)?.euler);
    let b = box_(&x_euler(&annulus_b_side_q0(params, o)?));
    let mut p = knot_params(params);
    p.insert("x_orders".into(), json!([o1, o2]));
    Ok(CheckReport::finish(
        "annulus-q0",
        p,
        first_series_mismatch(&b, &a),
        start,
    ))
}
