//! Open potentials `W_{g,n}(eta_1, ..., eta_n)`: integrals of `omega_{g,n}`
//! from the point `(X, V) = (0, -1)` in the framed coordinate `eta`.
//!
//! All series are in the phase-graded variables `eta' = zeta^k eta`; the
//! global coordinate of the `p = 1` curve is `t = V`.

use std::sync::Arc;

use super::eo::ThetaExpansion;
use crate::algebra::newton::newton_implicit_solve;
use crate::algebra::series::{PhaseRule, Series, SeriesRing};
use crate::algebra::{int, Rational, Ring};
use crate::curve::mirror::{eta_to_x, h_project, MirrorCurve, Orders};
use crate::curve::theta::{theta_factor, FormExpander};
use crate::curve::KnotParams;
use crate::{Error, Result};

/// Ring of `eta1..etan` (or `eta` when `n = 1`) with the framing phase rule.
pub fn eta_ring(params: &KnotParams, n: usize, order: u32) -> Arc<SeriesRing> {
    let names: Vec<String> = if n == 1 {
        vec!["eta".into()]
    } else {
        (1..=n).map(|i| format!("eta{i}")).collect()
    };
    let vars: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    SeriesRing::new(&vars, &vec![order; n])
        .with_phase(PhaseRule {
            k: params.k,
            r: params.r,
            eta: (0..n).collect(),
            q1: None,
        })
        .build()
}

/// `phi` (with `V = -exp(phi)`) at numeric Kahler parameters `q1..qp`.
pub fn phi_at_q(params: &KnotParams, q: &[Rational], eta_order: u32) -> Result<Series<Rational>> {
    let p = params.p as usize;
    if q.len() != p {
        return Err(Error::InvalidParams(format!("expected {p} values of q")));
    }
    let curve = MirrorCurve::new(*params);
    let sym = curve.ring(Orders { q: 1, eta: eta_order });
    let target = eta_ring(params, 1, eta_order);
    // stored variables are q1' = -q1 and q2..qp
    let mut qv: Vec<Rational> = q.to_vec();
    qv[0] = -qv[0].clone();
    let coeffs: Vec<Series<Rational>> = curve
        .e_polynomial(&sym)
        .iter()
        .map(|c| {
            let mut out = Series::zero(&target);
            for (e, v) in c.terms() {
                let mut w = v.clone();
                for (i, &a) in e[..p].iter().enumerate() {
                    w *= num_traits::pow::pow(qv[i].clone(), a as usize);
                }
                out.add_term(vec![e[p]], w);
            }
            out
        })
        .collect();
    let e = newton_implicit_solve(&target, &coeffs, &int(1))?;
    Ok(e.log()?.scale_q(&int(params.r)))
}

/// `V = -exp(phi)`.
pub fn v_of_phi(phi: &Series<Rational>) -> Result<Series<Rational>> {
    Ok(phi.exp()?.neg())
}

/// `W_{0,2} = int int (B - d eta1 d eta2 / (eta1 - eta2)^2)`, computed as
/// `log((V1 - V2)/(eta1 - eta2))` minus its boundary values. `v` lives in a
/// ring whose last variable is `eta` (any earlier ones are Kahler
/// parameters) and must be known to `eta^(2 order + 1)`.
pub fn annulus_w02(v: &Series<Rational>, order: u32) -> Result<Series<Rational>> {
    let src = v.ring();
    let nq = src.nvars() - 1;
    let have = src.orders()[nq];
    if have < 2 * order + 1 {
        return Err(Error::InsufficientOrder(format!(
            "V known to eta^{have}, need eta^{}",
            2 * order + 1
        )));
    }
    let ring = pair_ring(src, order);
    // (V(a) - V(b)) / (a - b) = sum_n v_n h_{n-1}(a, b)
    let mut d = Series::zero(&ring);
    let mut v1 = Series::zero(&ring);
    for (e, c) in v.terms() {
        let n = e[nq];
        if n == 1 {
            let mut x = e[..nq].to_vec();
            x.extend([0, 0]);
            v1.add_term(x, c.clone());
        }
        for a in 0..n.min(order + 1) {
            let b = n - 1 - a;
            if b <= order {
                let mut x = e[..nq].to_vec();
                x.extend([a, b]);
                d.add_term(x, c.clone());
            }
        }
    }
    if v1.constant_term().is_zero() {
        return Err(Error::Degenerate("dV/d eta vanishes at the base point".into()));
    }
    let d = d.div(&v1)?;
    let d1 = d.filter(|e| e[nq + 1] == 0);
    let d2 = d.filter(|e| e[nq] == 0);
    d.log()?.sub(&d1.log()?)?.sub(&d2.log()?)
}

/// `src` with its `eta` replaced by `eta1, eta2`.
fn pair_ring(src: &Arc<SeriesRing>, order: u32) -> Arc<SeriesRing> {
    let nq = src.nvars() - 1;
    let mut names: Vec<String> = src.vars()[..nq].to_vec();
    names.extend(["eta1".to_string(), "eta2".to_string()]);
    let vars: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let mut orders = src.orders()[..nq].to_vec();
    orders.extend([order, order]);
    let mut r = SeriesRing::new(&vars, &orders);
    if let Some((mask, b)) = src.total() {
        let masked: Vec<&str> = vars.iter().zip(mask).filter(|(_, m)| **m).map(|(n, _)| *n).collect();
        r = r.with_total(&masked, *b);
    }
    if let Some(rule) = src.phase() {
        r = r.with_phase(PhaseRule {
            eta: vec![nq, nq + 1],
            ..rule.clone()
        });
    }
    r.build()
}

/// `-r^2 h(W_{0,2})` at `q = 0` in `X1, X2`: the `q`-constant term of the
/// annulus potential computed with symbolic Kahler parameters.
pub fn annulus_b_side_q0(params: &KnotParams, x_order: u32) -> Result<Series<Rational>> {
    let order = params.r as u32 * x_order;
    let curve = MirrorCurve::new(*params);
    let phi = curve.solve_v_series(
        Orders {
            q: 1,
            eta: 2 * order + 1,
        },
        crate::curve::VRoute::Newton,
    )?;
    let w = annulus_w02(&v_of_phi(&phi)?, order)?;
    let nq = params.p as usize;
    let ring = eta_ring(params, 2, order);
    let w0 = w.reindex(&ring, |e| e[..nq].iter().all(|&x| x == 0).then(|| e[nq..].to_vec()));
    let h = h_project(&w0, params.r, &[0, 1]);
    Ok(eta_to_x(&h, params.r)?.scale_q(&int(-params.r * params.r)))
}

/// `int_0^eta theta^d_s` pulled back along `t = V(eta)`, for `d <= dmax`.
pub fn open_leaves<F: Ring>(
    fx: &FormExpander<'_, F>,
    v: &Series<Rational>,
    s: usize,
    dmax: usize,
) -> Result<Vec<Series<F>>> {
    let ring = v.ring().clone();
    let vf: Series<F> = v.map(|_, c| F::from_rational(c));
    let dv = vf.derive(0);
    let t_s = &fx.model().points[s].t;
    // V - t_s, invertible since the base point is not a ramification point
    let shifted = vf.sub(&Series::constant(&ring, t_s.clone()))?;
    let inv = shifted.inv()?;
    let mut out = Vec::with_capacity(dmax + 1);
    for d in 0..=dmax {
        let f = F::from_rational(&theta_factor(d));
        let mut acc = Series::zero(&ring);
        for (n, c) in fx.eta_poles(s, 2 * d)? {
            acc = acc.add(&inv.pow_u(n)?.scale(&c.mul_ref(&f)))?;
        }
        out.push(acc.mul(&dv)?.integrate(0));
    }
    Ok(out)
}

/// `W_{g,n} = sum c prod_i int_0^{eta_i} theta^{d_i}_{s_i}`.
pub fn wgn_potential<F: Ring>(
    fx: &FormExpander<'_, F>,
    omega: &ThetaExpansion<F>,
    v: &Series<Rational>,
) -> Result<Series<F>> {
    let n = omega.n;
    let order = v.ring().orders()[0];
    let dmax = omega
        .terms
        .keys()
        .flat_map(|k| k.iter().map(|x| x.1))
        .max()
        .unwrap_or(0);
    let npts = fx.model().n_points();
    let leaves: Vec<Vec<Series<F>>> = (0..npts).map(|s| open_leaves(fx, v, s, dmax)).collect::<Result<_>>()?;
    let ring = eta_ring_like(v.ring(), n, order);
    let lifted = |f: &Series<F>, i: usize| {
        f.reindex(&ring, |e| {
            let mut x = vec![0; n];
            x[i] = e[0];
            Some(x)
        })
    };
    let mut out = Series::zero(&ring);
    for (key, c) in &omega.terms {
        let mut term = Series::constant(&ring, c.clone());
        for (i, &(s, d)) in key.iter().enumerate() {
            term = term.mul(&lifted(&leaves[s][d], i))?;
        }
        out = out.add(&term)?;
    }
    Ok(out)
}

fn eta_ring_like(one: &Arc<SeriesRing>, n: usize, order: u32) -> Arc<SeriesRing> {
    let rule = one.phase().cloned();
    let names: Vec<String> = if n == 1 {
        vec!["eta".into()]
    } else {
        (1..=n).map(|i| format!("eta{i}")).collect()
    };
    let vars: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let mut r = SeriesRing::new(&vars, &vec![order; n]);
    if let Some(rule) = rule {
        r = r.with_phase(PhaseRule {
            eta: (0..n).collect(),
            ..rule
        });
    }
    r.build()
}

/// `(1/r) sum_i eta_i d/d eta_i`, which equals `sum_i X_i d/dX_i`.
pub fn euler_x(f: &Series<Rational>, r: i64) -> Series<Rational> {
    let n = f.ring().nvars();
    let mut out = Series::zero(f.ring());
    for (e, c) in f.terms() {
        let deg: u32 = e.iter().take(n).sum();
        if deg > 0 {
            out.add_term(e.clone(), c * Rational::new(deg.into(), r.into()));
        }
    }
    out
}
