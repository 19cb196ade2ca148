//! Genus-zero spectral curves in a global coordinate `t`, described by the
//! logarithmic derivatives `dx/dt`, `dy/dt` and local data at each simple
//! ramification point of `x`.

use std::fmt;

use crate::algebra::local::local_series_inversion;
use crate::algebra::poly::{Poly, RationalFunction};
use crate::algebra::{rat, Local, Rational, Ring};
use crate::{Error, Result};

/// `sum_i c_i / (t - a_i)` with rational data.
#[derive(Clone, Debug, PartialEq)]
pub struct PartialFractions {
    pub terms: Vec<(Rational, Rational)>,
}

impl PartialFractions {
    pub fn new(terms: Vec<(Rational, Rational)>) -> Self {
        PartialFractions {
            terms: terms.into_iter().filter(|(c, _)| !c.is_zero()).collect(),
        }
    }

    /// Taylor expansion at a point `t0` (not a pole) in `u = t - t0`.
    pub fn local_at<F: Ring>(&self, t0: &F, prec: i64) -> Result<Local<F>> {
        let mut acc = Local::zero(prec);
        for (c, a) in &self.terms {
            let d = t0.sub_ref(&F::from_rational(a));
            let di = d
                .try_inv()
                .ok_or_else(|| Error::Degenerate("expansion point is a pole".into()))?;
            let mut coeffs = Vec::with_capacity(prec.max(0) as usize);
            let mut cur = F::from_rational(c).mul_ref(&di);
            for _ in 0..prec.max(0) {
                coeffs.push(cur.clone());
                cur = cur.mul_ref(&di).neg_ref();
            }
            acc = acc.add(&Local::from_coeffs(0, coeffs, prec));
        }
        Ok(acc)
    }

    pub fn eval<F: Ring>(&self, t: &F) -> Result<F> {
        let mut acc = F::zero();
        for (c, a) in &self.terms {
            let d = t.sub_ref(&F::from_rational(a)).try_inv().ok_or(Error::NonUnit)?;
            acc = acc.add_ref(&F::from_rational(c).mul_ref(&d));
        }
        Ok(acc)
    }

    /// Half the second derivative of the primitive at `t`, i.e. `f'(t) / 2`.
    pub fn a2_at<F: Ring>(&self, t: &F) -> Result<F> {
        let mut acc = F::zero();
        for (c, a) in &self.terms {
            let d = t.sub_ref(&F::from_rational(a)).try_inv().ok_or(Error::NonUnit)?;
            acc = acc.sub_ref(&F::from_rational(c).mul_ref(&d).mul_ref(&d));
        }
        Ok(acc.scale(&rat(1, 2)))
    }

    pub fn to_rational_function<F: Ring>(&self) -> RationalFunction<F> {
        let mut acc = RationalFunction::from_poly(Poly::zero());
        for (c, a) in &self.terms {
            acc = acc.add(&RationalFunction::pole(F::from_rational(c), &F::from_rational(a), 1));
        }
        acc
    }
}

/// Local data at a simple ramification point `P`: `t = t_P + tau(zeta)` with
/// `x = x_P + zeta^2`, and `y - y_P` as a series in `zeta`.
#[derive(Clone, Debug, PartialEq)]
pub struct RamPoint<F: Ring> {
    pub t: F,
    /// `t - t_P` as a series in `zeta`.
    pub tau: Local<F>,
    /// `y - y_P` as a series in `zeta`.
    pub y: Local<F>,
    /// `zeta = c (t - t_P) + ...`.
    pub c: F,
    /// Coefficient of `zeta` in `y`.
    pub h1: F,
}

impl<F: Ring> RamPoint<F> {
    /// Build local data from `dx/dt`, `dy/dt`, the point and a square root
    /// `c` of `a2 = x''(t_P)/2`, with expansions known below `zeta^prec`.
    pub fn build(x: &PartialFractions, y: &PartialFractions, t: F, c: F, prec: i64) -> Result<Self> {
        let a2 = c.mul_ref(&c);
        if a2.is_zero() {
            return Err(Error::Degenerate("ramification point is not simple".into()));
        }
        let xl = x.local_at(&t, prec)?;
        if !xl.coeff(0)?.is_zero() {
            return Err(Error::Degenerate("dx does not vanish at the point".into()));
        }
        let big_a = xl.integrate()?; // x - x_P, val 2
        let ratio = big_a.shift_val(-2).scale(&a2.try_inv().ok_or(Error::NonUnit)?);
        let zeta_of_u = ratio.pow_rational(&rat(1, 2))?.shift_val(1).scale(&c);
        let tau = local_series_inversion(&zeta_of_u, prec - 1)?;
        let yl = y.local_at(&t, prec)?.integrate()?;
        let yz = yl.compose(&tau)?;
        let h1 = yz.coeff(1)?;
        Ok(RamPoint { t, tau, y: yz, c, h1 })
    }
}

/// A genus-zero curve with simple ramification points, Bergman kernel
/// `dt1 dt2 / (t1 - t2)^2`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralCurveModel<F: Ring> {
    pub label: String,
    pub points: Vec<RamPoint<F>>,
    /// `dx/dt` (absent for models given directly by local data).
    pub dx: Option<PartialFractions>,
    /// Polynomial `dx/dt` for models with `x` polynomial in `t`.
    pub dx_poly: Option<Poly<Rational>>,
    /// Local expansions are known below `zeta^prec`.
    pub prec: i64,
}

impl<F: Ring> SpectralCurveModel<F> {
    pub fn n_points(&self) -> usize {
        self.points.len()
    }

    /// `dx/dt` as a rational function over the model's field.
    pub fn dx_rational(&self) -> Result<RationalFunction<F>> {
        if let Some(pf) = &self.dx {
            return Ok(pf.to_rational_function());
        }
        if let Some(p) = &self.dx_poly {
            return Ok(RationalFunction::from_poly(Poly::new(
                p.coeffs().iter().map(F::from_rational).collect(),
            )));
        }
        Err(Error::Unsupported("model has no global dx".into()))
    }

    /// Identity used in memo keys.
    pub fn fingerprint(&self) -> String {
        format!("{}@{}", self.label, self.prec)
    }
}

impl SpectralCurveModel<Rational> {
    /// `x = t^2`, `y = t`: one ramification point at `t = 0` with `zeta = t`.
    pub fn airy(prec: i64) -> Self {
        let one = Rational::one();
        SpectralCurveModel {
            label: "airy".into(),
            points: vec![RamPoint {
                t: Rational::zero(),
                tau: Local::var(prec),
                y: Local::var(prec),
                c: one.clone(),
                h1: one,
            }],
            dx: None,
            dx_poly: Some(Poly::new(vec![Rational::zero(), crate::algebra::int(2)])),
            prec,
        }
    }
}

impl<F: Ring> fmt::Display for SpectralCurveModel<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} ({} ramification points)", self.label, self.points.len())?;
        for (i, p) in self.points.iter().enumerate() {
            writeln!(f, "  P{i}: t = {}, h1 = {}", p.t, p.h1)?;
        }
        Ok(())
    }
}

/// Run `f` with local precision `start`, doubling it on
/// [`Error::InsufficientOrder`] up to `max`.
pub fn with_escalation<T>(start: i64, max: i64, mut f: impl FnMut(i64) -> Result<T>) -> Result<T> {
    let mut prec = start;
    loop {
        match f(prec) {
            Err(Error::InsufficientOrder(_)) if prec < max => {
                prec = (prec * 2).min(max);
            }
            other => return other,
        }
    }
}
