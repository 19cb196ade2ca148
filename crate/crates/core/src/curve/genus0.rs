//! The `p = 1` mirror curve `U + V + 1 + q U / V = 0` at a numeric value of
//! `q`, parametrized by `t = V` with `U = -V (V + 1) / (V + q)`.
//!
//! Ramification points are the roots of
//! `s V^2 + (k + (s - r) q) V + s q = 0` and live in `K = Q(sqrt Disc)`.
//! The local coordinates `zeta = sqrt(x - x_P)` need the square roots of
//! `a2 = x''(t_P)/2` at both points, so the ramification data is stored over
//! the tower `L = K(sqrt a2(P0))(sqrt a2(P1))` (collapsed whenever a square
//! root already exists).

use std::sync::Arc;

use serde::Serialize;

use super::knot::KnotParams;
use super::spectral::{PartialFractions, RamPoint, SpectralCurveModel};
use crate::algebra::{int, rat, rational_sqrt, QuadExt, Rational, Ring};
use crate::{Error, Result};

pub type K = QuadExt<Rational>;
pub type K1 = QuadExt<K>;
pub type L = QuadExt<K1>;

pub fn k_to_l(x: &K) -> L {
    QuadExt::base(QuadExt::base(x.clone()))
}

pub fn q_to_l(x: &Rational) -> L {
    L::from_rational(x)
}

/// Square root of `x` inside `Q(sqrt d)`, when one exists.
pub fn sqrt_in_k(x: &K, d: Option<&Rational>) -> Option<K> {
    if x.b.is_zero() {
        if let Some(s) = rational_sqrt(&x.a) {
            return Some(K::base(s));
        }
        let d = d?;
        let s = rational_sqrt(&(&x.a / d))?;
        return Some(K::new(Rational::zero(), s, Arc::new(d.clone())));
    }
    let d = x.d.as_ref()?;
    let n = rational_sqrt(&(&x.a * &x.a - &x.b * &x.b * d.as_ref()))?;
    for cand in [(&x.a + &n) / int(2), (&x.a - &n) / int(2)] {
        if let Some(u) = rational_sqrt(&cand) {
            if !u.is_zero() {
                let v = &x.b / (int(2) * &u);
                return Some(K::new(u, v, d.clone()));
            }
        }
    }
    None
}

/// The curve at a fixed rational `q`.
#[derive(Clone, Debug)]
pub struct ConifoldCurve {
    pub params: KnotParams,
    pub q: Rational,
    pub disc: Rational,
    pub dx: PartialFractions,
    pub dy: PartialFractions,
    pub t: Vec<K>,
    pub a2: Vec<K>,
    pub c: Vec<L>,
}

impl ConifoldCurve {
    pub fn new(params: KnotParams, q: Rational) -> Result<Self> {
        if params.p != 1 {
            return Err(Error::Unsupported(
                "ramification data is implemented for p = 1 only".into(),
            ));
        }
        let KnotParams {
            r, s, k, gamma, delta, ..
        } = params;
        if q.is_zero() || q == int(1) {
            return Err(Error::Degenerate(format!("q = {q} lies on the degeneration locus")));
        }
        let (ri, si, ki) = (int(r), int(s), int(k));
        let lin = &ki + (&si - &ri) * &q;
        let disc = &lin * &lin - int(4) * &si * &si * &q;
        if disc.is_zero() {
            return Err(Error::Degenerate(format!("discriminant vanishes at q = {q}")));
        }
        let sqrt_disc = match rational_sqrt(&disc) {
            Some(s) => K::base(s),
            None => K::sqrt_of(disc.clone()),
        };
        let inv2s = Rational::new(1.into(), (2 * s).into());
        let t: Vec<K> = [1, -1]
            .iter()
            .map(|&sg| K::base(-&lin).add_ref(&sqrt_disc.scale(&int(sg))).scale(&inv2s))
            .collect();
        let dx = PartialFractions::new(vec![(int(k - r), int(0)), (int(-r), int(-1)), (int(r), -&q)]);
        let dy = PartialFractions::new(vec![
            (int(-gamma - delta), int(0)),
            (int(-gamma), int(-1)),
            (int(gamma), -&q),
        ]);
        let a2: Vec<K> = t.iter().map(|ti| dx.a2_at(ti)).collect::<Result<_>>()?;
        let dk = if sqrt_disc.b.is_zero() { None } else { Some(&disc) };
        let c0 = match sqrt_in_k(&a2[0], dk) {
            Some(c) => K1::base(c),
            None => K1::sqrt_of(a2[0].clone()),
        };
        let c1 = if let Some(c) = sqrt_in_k(&a2[1], dk) {
            L::base(K1::base(c))
        } else if let Some(m) = sqrt_in_k(&a2[0].mul_ref(&a2[1]), dk) {
            L::base(K1::base(m).mul_ref(&c0.try_inv().ok_or(Error::NonUnit)?))
        } else {
            L::sqrt_of(K1::base(a2[1].clone()))
        };
        let c = vec![L::base(c0), c1];
        Ok(ConifoldCurve {
            params,
            q,
            disc,
            dx,
            dy,
            t,
            a2,
            c,
        })
    }

    /// Spectral-curve model with local expansions known below `zeta^prec`.
    pub fn model(&self, prec: i64) -> Result<SpectralCurveModel<L>> {
        let points = self
            .t
            .iter()
            .zip(&self.c)
            .map(|(t, c)| {
                let p = RamPoint::build(&self.dx, &self.dy, k_to_l(t), c.clone(), prec)?;
                if p.h1.is_zero() {
                    return Err(Error::Degenerate("dy vanishes at a ramification point".into()));
                }
                Ok(p)
            })
            .collect::<Result<_>>()?;
        let KnotParams { p, r, s, .. } = self.params;
        Ok(SpectralCurveModel {
            label: format!("conifold(p={p},r={r},s={s},q={})", self.q),
            points,
            dx: Some(self.dx.clone()),
            dx_poly: None,
            prec,
        })
    }

    pub fn dump(&self, prec: i64) -> Result<CurveDump> {
        let model = self.model(prec)?;
        let ramification = model
            .points
            .iter()
            .zip(&self.t)
            .map(|(pt, t)| RamificationDump {
                v: t.to_string(),
                h1: pt.h1.to_string(),
                local: (1..prec)
                    .map(|j| LocalTerm {
                        j,
                        tau: pt.tau.coeff(j).map(|c| c.to_string()).unwrap_or_default(),
                        y: pt.y.coeff(j).map(|c| c.to_string()).unwrap_or_default(),
                    })
                    .collect(),
            })
            .collect();
        Ok(CurveDump {
            params: self.params,
            q: vec![self.q.to_string()],
            discriminant: self.disc.to_string(),
            ramification,
        })
    }
}

/// The `q = 0` limit `U = -(V + 1)`: a single ramification point at
/// `t = -k/s`, defined over `Q(sqrt a2)`.
pub fn conifold_q0_model(params: KnotParams, prec: i64) -> Result<SpectralCurveModel<K>> {
    if params.p != 1 {
        return Err(Error::Unsupported("q = 0 curve implemented for p = 1 only".into()));
    }
    let KnotParams {
        r, s, k, gamma, delta, ..
    } = params;
    let dx = PartialFractions::new(vec![(int(k), int(0)), (int(-r), int(-1))]);
    let dy = PartialFractions::new(vec![(int(-delta), int(0)), (int(-gamma), int(-1))]);
    let t = rat(-k, s);
    let a2: Rational = dx.a2_at(&t)?;
    let c = match rational_sqrt(&a2) {
        Some(c) => K::base(c),
        None => K::sqrt_of(a2),
    };
    let point = RamPoint::build(&dx, &dy, K::base(t), c, prec)?;
    Ok(SpectralCurveModel {
        label: format!("conifold_q0(r={r},s={s})"),
        points: vec![point],
        dx: Some(dx),
        dx_poly: None,
        prec,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct LocalTerm {
    pub j: i64,
    pub tau: String,
    pub y: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct RamificationDump {
    #[serde(rename = "V")]
    pub v: String,
    pub h1: String,
    pub local: Vec<LocalTerm>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CurveDump {
    pub params: KnotParams,
    pub q: Vec<String>,
    pub discriminant: String,
    pub ramification: Vec<RamificationDump>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Local;

    #[test]
    fn conifold_ramification() {
        let params = KnotParams::new(1, 1, 1).unwrap();
        let curve = ConifoldCurve::new(params, rat(1, 7)).unwrap();
        assert_eq!(curve.disc, rat(24, 7));
        assert_eq!(curve.t.len(), 2);
        // roots of V^2 + 2V + q
        for t in &curve.t {
            let v = t
                .mul_ref(t)
                .add_ref(&t.scale(&int(2)))
                .add_ref(&K::from_rational(&rat(1, 7)));
            assert!(v.is_zero());
        }
        assert_eq!(curve.t[0].conj(), curve.t[1]);
        let model = curve.model(10).unwrap();
        for (pt, c) in model.points.iter().zip(&curve.c) {
            assert_eq!(pt.tau.coeff(1).unwrap(), c.try_inv().unwrap());
            // dx/dt along tau(zeta) times dtau/dzeta equals 2 zeta
            let xl: Local<L> = curve.dx.local_at(&pt.t, 10).unwrap();
            let dxdz = xl.compose(&pt.tau).unwrap().mul(&pt.tau.derivative());
            assert_eq!(dxdz.truncate(8), Local::monomial(int(2).into_l(), 1, 8));
        }
    }

    #[test]
    fn degenerate_values() {
        let params = KnotParams::new(1, 1, 1).unwrap();
        assert!(matches!(ConifoldCurve::new(params, int(1)), Err(Error::Degenerate(_))));
        assert!(matches!(ConifoldCurve::new(params, int(0)), Err(Error::Degenerate(_))));
        assert!(matches!(
            ConifoldCurve::new(KnotParams::new(3, 1, 2).unwrap(), rat(1, 7)),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn square_roots_in_k() {
        let d = int(2);
        let x = K::new(int(3), int(2), Arc::new(d.clone())); // (1 + sqrt2)^2
        let s = sqrt_in_k(&x, Some(&d)).unwrap();
        assert_eq!(s.mul_ref(&s), x);
        assert_eq!(
            sqrt_in_k(&K::base(int(8)), Some(&d))
                .unwrap()
                .mul_ref(&sqrt_in_k(&K::base(int(8)), Some(&d)).unwrap()),
            K::base(int(8))
        );
        assert!(sqrt_in_k(&K::base(int(3)), Some(&d)).is_none());
    }

    trait IntoL {
        fn into_l(self) -> L;
    }
    impl IntoL for Rational {
        fn into_l(self) -> L {
            q_to_l(&self)
        }
    }
}
