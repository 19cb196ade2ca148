//! Sparse truncated multivariate power series.
//!
//! A [`SeriesRing`] fixes the variables, a per-variable truncation order
//! (exponents up to and including the order are kept) and optionally a bound
//! on the total degree in a subset of the variables. A [`PhaseRule`] records
//! the root-of-unity grading carried by the monomials: every exponent `m` of
//! an `eta` variable stands for `zeta^(k m)` with `zeta = exp(i pi / r)`, and
//! every exponent `a` of `q1` for `(-1)^a`. Coefficients are stored without
//! these phases, so they stay rational.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::{int, Rational, Ring};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhaseRule {
    pub k: i64,
    pub r: i64,
    /// Indices of the `eta`-type variables.
    pub eta: Vec<usize>,
    /// Index of `q1`, if present.
    pub q1: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesRing {
    vars: Vec<String>,
    orders: Vec<u32>,
    total: Option<(Vec<bool>, u32)>,
    phase: Option<PhaseRule>,
}

impl SeriesRing {
    pub fn new(vars: &[&str], orders: &[u32]) -> Self {
        assert_eq!(vars.len(), orders.len(), "one order per variable");
        SeriesRing {
            vars: vars.iter().map(|s| s.to_string()).collect(),
            orders: orders.to_vec(),
            total: None,
            phase: None,
        }
    }

    /// Bound the total degree in the named variables.
    pub fn with_total(mut self, names: &[&str], bound: u32) -> Self {
        let mask = self.vars.iter().map(|v| names.contains(&v.as_str())).collect();
        self.total = Some((mask, bound));
        self
    }

    pub fn with_phase(mut self, phase: PhaseRule) -> Self {
        self.phase = Some(phase);
        self
    }

    pub fn build(self) -> Arc<Self> {
        Arc::new(self)
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn orders(&self) -> &[u32] {
        &self.orders
    }

    pub fn total(&self) -> Option<&(Vec<bool>, u32)> {
        self.total.as_ref()
    }

    pub fn phase(&self) -> Option<&PhaseRule> {
        self.phase.as_ref()
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn index(&self, name: &str) -> Result<usize> {
        self.vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::Incompatible(format!("no variable {name}")))
    }

    pub fn in_bounds(&self, exp: &[u32]) -> bool {
        if exp.iter().zip(&self.orders).any(|(e, o)| e > o) {
            return false;
        }
        match &self.total {
            None => true,
            Some((mask, b)) => {
                let t: u32 = exp.iter().zip(mask).filter(|(_, m)| **m).map(|(e, _)| *e).sum();
                t <= *b
            }
        }
    }

    /// Common ring of two operands: same variables, minimal truncation.
    pub fn join(a: &Arc<Self>, b: &Arc<Self>) -> Result<Arc<Self>> {
        if Arc::ptr_eq(a, b) || a == b {
            return Ok(a.clone());
        }
        if a.vars != b.vars {
            return Err(Error::Incompatible(format!("variables {:?} vs {:?}", a.vars, b.vars)));
        }
        let orders = a.orders.iter().zip(&b.orders).map(|(x, y)| *x.min(y)).collect();
        let total = match (&a.total, &b.total) {
            (Some((m1, b1)), Some((m2, b2))) => {
                if m1 != m2 {
                    return Err(Error::Incompatible("total-degree masks differ".into()));
                }
                Some((m1.clone(), *b1.min(b2)))
            }
            (Some(t), None) | (None, Some(t)) => Some(t.clone()),
            (None, None) => None,
        };
        let phase = match (&a.phase, &b.phase) {
            (Some(x), Some(y)) if x != y => {
                return Err(Error::Incompatible("phase rules differ".into()));
            }
            (Some(x), _) | (None, Some(x)) => Some(x.clone()),
            (None, None) => None,
        };
        Ok(Arc::new(SeriesRing {
            vars: a.vars.clone(),
            orders,
            total,
            phase,
        }))
    }
}

#[derive(Clone, Debug)]
pub struct Series<C: Ring> {
    ring: Arc<SeriesRing>,
    terms: BTreeMap<Vec<u32>, C>,
}

impl<C: Ring> PartialEq for Series<C> {
    fn eq(&self, other: &Self) -> bool {
        self.ring.vars == other.ring.vars && self.terms == other.terms
    }
}

impl<C: Ring> Series<C> {
    pub fn zero(ring: &Arc<SeriesRing>) -> Self {
        Series {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ring: &Arc<SeriesRing>, c: C) -> Self {
        let mut s = Self::zero(ring);
        s.add_term(vec![0; ring.nvars()], c);
        s
    }

    pub fn one(ring: &Arc<SeriesRing>) -> Self {
        Self::constant(ring, C::one())
    }

    pub fn monomial(ring: &Arc<SeriesRing>, exp: Vec<u32>, c: C) -> Self {
        let mut s = Self::zero(ring);
        s.add_term(exp, c);
        s
    }

    pub fn var(ring: &Arc<SeriesRing>, i: usize) -> Self {
        let mut e = vec![0; ring.nvars()];
        e[i] = 1;
        Self::monomial(ring, e, C::one())
    }

    pub fn var_named(ring: &Arc<SeriesRing>, name: &str) -> Result<Self> {
        Ok(Self::var(ring, ring.index(name)?))
    }

    pub fn from_terms(ring: &Arc<SeriesRing>, terms: impl IntoIterator<Item = (Vec<u32>, C)>) -> Self {
        let mut s = Self::zero(ring);
        for (e, c) in terms {
            s.add_term(e, c);
        }
        s
    }

    /// Accumulate `c * x^exp`, dropping it when out of bounds.
    pub fn add_term(&mut self, exp: Vec<u32>, c: C) {
        if c.is_zero() || !self.ring.in_bounds(&exp) {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().add_ref(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn ring(&self) -> &Arc<SeriesRing> {
        &self.ring
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, C> {
        &self.terms
    }

    pub fn coeff(&self, exp: &[u32]) -> C {
        self.terms.get(exp).cloned().unwrap_or_else(C::zero)
    }

    pub fn constant_term(&self) -> C {
        self.coeff(&vec![0; self.ring.nvars()])
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Re-truncate into another ring over the same variables.
    pub fn retruncate(&self, ring: &Arc<SeriesRing>) -> Result<Self> {
        if ring.vars != self.ring.vars {
            return Err(Error::Incompatible("variables differ".into()));
        }
        Ok(Self::from_terms(
            ring,
            self.terms.iter().map(|(e, c)| (e.clone(), c.clone())),
        ))
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        let ring = SeriesRing::join(&self.ring, &o.ring)?;
        let mut s = Series {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        };
        for (e, c) in self.terms.iter().chain(o.terms.iter()) {
            s.add_term(e.clone(), c.clone());
        }
        Ok(s)
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        Series {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.neg_ref())).collect(),
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::from_terms(&self.ring, self.terms.iter().map(|(e, x)| (e.clone(), x.mul_ref(c))))
    }

    pub fn scale_q(&self, c: &Rational) -> Self {
        Self::from_terms(&self.ring, self.terms.iter().map(|(e, x)| (e.clone(), x.scale(c))))
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        let ring = SeriesRing::join(&self.ring, &o.ring)?;
        let mut s = Series {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        };
        let mut exp = vec![0u32; ring.nvars()];
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                for i in 0..exp.len() {
                    exp[i] = e1[i] + e2[i];
                }
                if ring.in_bounds(&exp) {
                    s.add_term(exp.clone(), c1.mul_ref(c2));
                }
            }
        }
        Ok(s)
    }

    pub fn pow_u(&self, e: u32) -> Result<Self> {
        let mut acc = Self::one(&self.ring);
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Drop the constant term.
    fn nilpotent_part(&self) -> Self {
        let mut s = self.clone();
        s.terms.remove(&vec![0; self.ring.nvars()]);
        s
    }

    /// Inverse of a series whose constant term is a unit. The constant is
    /// divided out first, then the geometric series in the nilpotent part.
    pub fn inv(&self) -> Result<Self> {
        let c0 = self.constant_term();
        let ci = c0.try_inv().ok_or(Error::NonUnit)?;
        let f = self.nilpotent_part().scale(&ci).neg();
        let mut acc = Self::one(&self.ring);
        let mut pw = Self::one(&self.ring);
        loop {
            pw = pw.mul(&f)?;
            if pw.is_zero() {
                break;
            }
            acc = acc.add(&pw)?;
        }
        Ok(acc.scale(&ci))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        self.mul(&o.inv()?)
    }

    /// Exponential of a series with zero constant term.
    pub fn exp(&self) -> Result<Self> {
        if !self.constant_term().is_zero() {
            return Err(Error::ExpOfNonNilpotent);
        }
        let mut acc = Self::one(&self.ring);
        let mut pw = Self::one(&self.ring);
        let mut n = 1i64;
        loop {
            pw = pw.mul(self)?.scale_q(&Rational::new(1.into(), n.into()));
            if pw.is_zero() {
                break;
            }
            acc = acc.add(&pw)?;
            n += 1;
        }
        Ok(acc)
    }

    /// Logarithm of a series with constant term 1.
    pub fn log(&self) -> Result<Self> {
        if !self.constant_term().is_one() {
            return Err(Error::LogOfNonUnit);
        }
        let f = self.nilpotent_part();
        let mut acc = Self::zero(&self.ring);
        let mut pw = Self::one(&self.ring);
        let mut n = 1i64;
        loop {
            pw = pw.mul(&f)?;
            if pw.is_zero() {
                break;
            }
            let sign = if n % 2 == 1 { 1 } else { -1 };
            acc = acc.add(&pw.scale_q(&Rational::new(sign.into(), n.into())))?;
            n += 1;
        }
        Ok(acc)
    }

    /// `(1 + f)^alpha` for a series with constant term 1.
    pub fn pow_rational(&self, alpha: &Rational) -> Result<Self> {
        Ok(self.log()?.scale_q(alpha).exp()?)
    }

    pub fn derive(&self, var: usize) -> Self {
        Self::from_terms(
            &self.ring,
            self.terms.iter().filter(|(e, _)| e[var] > 0).map(|(e, c)| {
                let mut e2 = e.clone();
                e2[var] -= 1;
                (e2, c.scale(&int(e[var] as i64)))
            }),
        )
    }

    /// Euler operator `x d/dx` in the given variable.
    pub fn euler(&self, var: usize) -> Self {
        Self::from_terms(
            &self.ring,
            self.terms
                .iter()
                .map(|(e, c)| (e.clone(), c.scale(&int(e[var] as i64)))),
        )
    }

    /// Termwise antiderivative in `var`, zero constant of integration.
    pub fn integrate(&self, var: usize) -> Self {
        Self::from_terms(
            &self.ring,
            self.terms.iter().map(|(e, c)| {
                let mut e2 = e.clone();
                e2[var] += 1;
                (e2, c.scale(&Rational::new(1.into(), (e[var] as i64 + 1).into())))
            }),
        )
    }

    /// Termwise `int f dx/x`; a term with no `x` is not integrable.
    pub fn integrate_log(&self, var: usize) -> Result<Self> {
        let mut out = Self::zero(&self.ring);
        for (e, c) in &self.terms {
            if e[var] == 0 {
                return Err(Error::NonIntegrable(format!(
                    "term without {} in logarithmic integral",
                    self.ring.vars[var]
                )));
            }
            out.add_term(e.clone(), c.scale(&Rational::new(1.into(), (e[var] as i64).into())));
        }
        Ok(out)
    }

    /// Substitute a series (in `target`) for every variable. Substituted
    /// series must have zero constant term unless the variable only occurs
    /// to bounded degree, which always holds here since exponents are finite.
    pub fn compose(&self, target: &Arc<SeriesRing>, subs: &[Series<C>]) -> Result<Self> {
        if subs.len() != self.ring.nvars() {
            return Err(Error::Incompatible("one substitution per variable".into()));
        }
        let mut powers: Vec<Vec<Series<C>>> = subs.iter().map(|s| vec![Series::one(target), s.clone()]).collect();
        let mut out = Self::zero(target);
        for (e, c) in &self.terms {
            let mut term = Series::constant(target, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                while powers[i].len() <= k as usize {
                    let next = powers[i].last().unwrap().mul(&subs[i])?;
                    powers[i].push(next);
                }
                term = term.mul(&powers[i][k as usize])?;
                if term.is_zero() {
                    break;
                }
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// Keep only the terms satisfying `pred`.
    pub fn filter(&self, pred: impl Fn(&[u32]) -> bool) -> Self {
        Series {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| pred(e))
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Apply a map to every coefficient, keeping the ring.
    pub fn map<D: Ring>(&self, f: impl Fn(&Vec<u32>, &C) -> D) -> Series<D> {
        Series::from_terms(&self.ring, self.terms.iter().map(|(e, c)| (e.clone(), f(e, c))))
    }

    /// Move the terms into a different ring via an exponent map; terms mapped
    /// to `None` are dropped.
    pub fn reindex(&self, target: &Arc<SeriesRing>, f: impl Fn(&[u32]) -> Option<Vec<u32>>) -> Self {
        let mut out = Self::zero(target);
        for (e, c) in &self.terms {
            if let Some(e2) = f(e) {
                out.add_term(e2, c.clone());
            }
        }
        out
    }

    /// Remove the phase grading: requires every `eta` exponent divisible by
    /// `r` and returns the true coefficients in a ring without phase rule.
    pub fn dephase(&self) -> Result<Self> {
        let Some(rule) = self.ring.phase.clone() else {
            return Ok(self.clone());
        };
        let mut ring = (*self.ring).clone();
        ring.phase = None;
        let ring = Arc::new(ring);
        let mut out = Self::zero(&ring);
        for (e, c) in &self.terms {
            let mut sign = 0i64;
            for &i in &rule.eta {
                let m = e[i] as i64;
                if m % rule.r != 0 {
                    return Err(Error::Incompatible(format!(
                        "eta exponent {m} not divisible by r = {}",
                        rule.r
                    )));
                }
                sign += rule.k * m / rule.r;
            }
            if let Some(i) = rule.q1 {
                sign += e[i] as i64;
            }
            out.add_term(e.clone(), if sign % 2 == 0 { c.clone() } else { c.neg_ref() });
        }
        Ok(out)
    }
}

impl<C: Ring> fmt::Display for Series<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for (v, k) in self.ring.vars.iter().zip(e) {
                match k {
                    0 => {}
                    1 => write!(f, "*{v}")?,
                    _ => write!(f, "*{v}^{k}")?,
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;
    use proptest::prelude::*;

    type S = Series<Rational>;

    fn uni(n: u32) -> Arc<SeriesRing> {
        SeriesRing::new(&["eta"], &[n]).build()
    }

    #[test]
    fn exp_log_roundtrip() {
        let ring = SeriesRing::new(&["q1", "eta"], &[5, 5]).build();
        let f = S::one(&ring).add(&S::var(&ring, 0)).unwrap();
        assert_eq!(f.log().unwrap().exp().unwrap(), f);
    }

    #[test]
    fn difference_of_squares() {
        let ring = uni(6);
        let x = S::var(&ring, 0);
        let one = S::one(&ring);
        let p = one.add(&x).unwrap().mul(&one.sub(&x).unwrap()).unwrap();
        assert_eq!(p, one.sub(&x.mul(&x).unwrap()).unwrap());
    }

    #[test]
    fn derivative_of_log_series() {
        let ring = uni(8);
        let n = 6;
        let f = S::from_terms(&ring, (1..=n).map(|m| (vec![m], rat(1, m as i64))));
        let g = S::from_terms(&ring, (1..=n).map(|m| (vec![m - 1], int(1))));
        assert_eq!(f.derive(0), g);
    }

    #[test]
    fn mixed_orders_truncate_to_minimum() {
        let a = S::var(&uni(3), 0);
        let b = S::var(&uni(5), 0).pow_u(4).unwrap();
        let c = a.add(&b).unwrap();
        assert_eq!(c.ring().orders(), &[3]);
        assert_eq!(c.len(), 1);
        let other = S::var(&SeriesRing::new(&["q1"], &[3]).build(), 0);
        assert!(matches!(a.add(&other), Err(Error::Incompatible(_))));
    }

    #[test]
    fn nonunit_errors() {
        let x = S::var(&uni(3), 0);
        assert_eq!(x.inv(), Err(Error::NonUnit));
        assert_eq!(x.log(), Err(Error::LogOfNonUnit));
        assert!(S::one(&uni(3)).exp().is_err());
        assert!(S::one(&uni(3)).integrate_log(0).is_err());
    }

    #[test]
    fn total_degree_bound() {
        let ring = SeriesRing::new(&["q1", "q2", "eta"], &[3, 3, 3])
            .with_total(&["q1", "q2"], 2)
            .build();
        let s = S::var(&ring, 0)
            .mul(&S::var(&ring, 1))
            .unwrap()
            .mul(&S::var(&ring, 1))
            .unwrap();
        assert!(s.is_zero());
    }

    fn series_strategy() -> impl Strategy<Value = S> {
        prop::collection::vec(((0u32..4, 0u32..4), -5i64..=5), 0..8).prop_map(|ts| {
            let ring = SeriesRing::new(&["q1", "eta"], &[4, 4]).build();
            S::from_terms(&ring, ts.into_iter().map(|((a, b), c)| (vec![a, b], int(c))))
        })
    }

    proptest! {
        #[test]
        fn inverse_is_inverse(f in series_strategy(), c in 1i64..5) {
            let ring = f.ring().clone();
            let u = f.filter(|e| e.iter().any(|&x| x > 0)).add(&S::constant(&ring, int(c))).unwrap();
            prop_assert_eq!(u.mul(&u.inv().unwrap()).unwrap(), S::one(&ring));
        }

        #[test]
        fn multiplication_commutes(f in series_strategy(), g in series_strategy()) {
            prop_assert_eq!(f.mul(&g).unwrap(), g.mul(&f).unwrap());
        }

        #[test]
        fn exp_is_additive(f in series_strategy(), g in series_strategy()) {
            let f = f.filter(|e| e.iter().any(|&x| x > 0));
            let g = g.filter(|e| e.iter().any(|&x| x > 0));
            let lhs = f.add(&g).unwrap().exp().unwrap();
            let rhs = f.exp().unwrap().mul(&g.exp().unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn dephase_is_multiplicative(f in series_strategy(), g in series_strategy(), k in 1i64..4) {
            // r = 2: keep even eta exponents only
            let rule = PhaseRule { k, r: 2, eta: vec![1], q1: Some(0) };
            let ring = SeriesRing::new(&["q1", "eta"], &[4, 4]).with_phase(rule).build();
            let even = |s: &S| s.retruncate(&ring).unwrap().filter(|e| e[1] % 2 == 0);
            let (f, g) = (even(&f), even(&g));
            let lhs = f.mul(&g).unwrap().dephase().unwrap();
            let rhs = f.dephase().unwrap().mul(&g.dephase().unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
