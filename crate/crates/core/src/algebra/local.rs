//! Univariate truncated Laurent series with explicit precision, used for
//! expansions near points of a curve.

use std::fmt;

use super::{binomial_rational, int, Rational, Ring};
use crate::{Error, Result};

/// `sum_{e >= val} c_e u^e + O(u^prec)`; `coeffs[i]` is the coefficient of
/// `u^(val + i)`. Normalized so the first stored coefficient is nonzero.
#[derive(Clone, Debug, PartialEq)]
pub struct Local<F: Ring> {
    val: i64,
    coeffs: Vec<F>,
    prec: i64,
}

impl<F: Ring> Local<F> {
    pub fn from_coeffs(val: i64, mut coeffs: Vec<F>, prec: i64) -> Self {
        let keep = (prec - val).max(0) as usize;
        coeffs.truncate(keep);
        let lead = coeffs.iter().position(|c| !c.is_zero());
        match lead {
            None => Local {
                val: prec,
                coeffs: vec![],
                prec,
            },
            Some(i) => {
                coeffs.drain(..i);
                while coeffs.last().is_some_and(|c| c.is_zero()) {
                    coeffs.pop();
                }
                Local {
                    val: val + i as i64,
                    coeffs,
                    prec,
                }
            }
        }
    }

    pub fn zero(prec: i64) -> Self {
        Local {
            val: prec,
            coeffs: vec![],
            prec,
        }
    }

    pub fn constant(c: F, prec: i64) -> Self {
        Self::from_coeffs(0, vec![c], prec)
    }

    /// `c u^e`.
    pub fn monomial(c: F, e: i64, prec: i64) -> Self {
        Self::from_coeffs(e, vec![c], prec)
    }

    /// The coordinate `u` itself.
    pub fn var(prec: i64) -> Self {
        Self::monomial(F::one(), 1, prec)
    }

    pub fn val(&self) -> i64 {
        self.val
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn lead(&self) -> Option<&F> {
        self.coeffs.first()
    }

    /// Coefficient of `u^e`; fails when `e` is beyond the known precision.
    pub fn coeff(&self, e: i64) -> Result<F> {
        if e >= self.prec {
            return Err(Error::InsufficientOrder(format!(
                "coefficient u^{e} requested, series known below u^{}",
                self.prec
            )));
        }
        Ok(self.get(e))
    }

    fn get(&self, e: i64) -> F {
        if e < self.val {
            return F::zero();
        }
        self.coeffs
            .get((e - self.val) as usize)
            .cloned()
            .unwrap_or_else(F::zero)
    }

    /// Nonzero terms as `(exponent, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &F)> {
        let v = self.val;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (v + i as i64, c))
    }

    pub fn truncate(&self, prec: i64) -> Self {
        Self::from_coeffs(self.val, self.coeffs.clone(), prec.min(self.prec))
    }

    pub fn add(&self, o: &Self) -> Self {
        let prec = self.prec.min(o.prec);
        let lo = self.val.min(o.val).min(prec);
        let hi = (self.val + self.coeffs.len() as i64)
            .max(o.val + o.coeffs.len() as i64)
            .min(prec);
        Self::from_coeffs(lo, (lo..hi).map(|e| self.get(e).add_ref(&o.get(e))).collect(), prec)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        Local {
            val: self.val,
            coeffs: self.coeffs.iter().map(|c| c.neg_ref()).collect(),
            prec: self.prec,
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        Self::from_coeffs(self.val, self.coeffs.iter().map(|x| x.mul_ref(c)).collect(), self.prec)
    }

    pub fn scale_q(&self, c: &Rational) -> Self {
        Self::from_coeffs(self.val, self.coeffs.iter().map(|x| x.scale(c)).collect(), self.prec)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let prec = (self.val + o.prec).min(o.val + self.prec);
        if self.is_zero() || o.is_zero() {
            return Self::zero(prec);
        }
        let val = self.val + o.val;
        let n = ((prec - val).max(0) as usize).min(self.coeffs.len() + o.coeffs.len() - 1);
        let mut out = vec![F::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if i >= n || a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate().take(n - i) {
                out[i + j] = out[i + j].add_ref(&a.mul_ref(b));
            }
        }
        Self::from_coeffs(val, out, prec)
    }

    /// Multiply by `u^m`.
    pub fn shift_val(&self, m: i64) -> Self {
        Local {
            val: self.val + m,
            coeffs: self.coeffs.clone(),
            prec: self.prec + m,
        }
    }

    pub fn inv(&self) -> Result<Self> {
        let lead = self.lead().ok_or(Error::NonUnit)?;
        let l = lead.try_inv().ok_or(Error::NonUnit)?;
        let n = self.coeffs.len().max(1);
        if n == 1 {
            return Ok(Self::monomial(l, -self.val, self.prec - 2 * self.val));
        }
        let rel = (self.prec - self.val) as usize;
        let mut out: Vec<F> = Vec::with_capacity(rel);
        for k in 0..rel {
            if k == 0 {
                out.push(l.clone());
                continue;
            }
            let mut acc = F::zero();
            for j in 1..=k.min(n - 1) {
                acc = acc.add_ref(&self.coeffs[j].mul_ref(&out[k - j]));
            }
            out.push(acc.neg_ref().mul_ref(&l));
        }
        Ok(Self::from_coeffs(-self.val, out, self.prec - 2 * self.val))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow_u(&self, e: u32) -> Self {
        let mut acc = Self::constant(F::one(), i64::MAX / 4);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::from_coeffs(
            self.val - 1,
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| c.scale(&int(self.val + i as i64)))
                .collect(),
            self.prec - 1,
        )
    }

    /// Antiderivative without constant; fails on a `u^-1` term.
    pub fn integrate(&self) -> Result<Self> {
        let mut out = Vec::with_capacity(self.coeffs.len());
        for (i, c) in self.coeffs.iter().enumerate() {
            let e = self.val + i as i64;
            if e == -1 {
                if !c.is_zero() {
                    return Err(Error::NonIntegrable("u^-1 term".into()));
                }
                out.push(F::zero());
            } else {
                out.push(c.scale(&Rational::new(1.into(), (e + 1).into())));
            }
        }
        Ok(Self::from_coeffs(self.val + 1, out, self.prec + 1))
    }

    /// `f(s(u))` for `s` of positive valuation.
    pub fn compose(&self, s: &Self) -> Result<Self> {
        if s.is_zero() || s.val < 1 {
            return Err(Error::Unsupported("substitution needs positive valuation".into()));
        }
        let out_prec = self.prec.saturating_mul(s.val);
        let mut acc = Self::zero(out_prec);
        if self.is_zero() {
            return Ok(acc);
        }
        let mut pw = if self.val >= 0 {
            s.pow_u(self.val as u32)
        } else {
            s.inv()?.pow_u((-self.val) as u32)
        };
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                pw = pw.mul(s).truncate(out_prec);
            }
            if !c.is_zero() {
                acc = acc.add(&pw.scale(c));
            }
        }
        Ok(acc.truncate(out_prec))
    }

    /// `(1 + g)^alpha` for a series with constant term 1.
    pub fn pow_rational(&self, alpha: &Rational) -> Result<Self> {
        if self.val != 0 || !self.lead().is_some_and(|c| c.is_one()) {
            return Err(Error::NonUnit);
        }
        let g = self.sub(&Self::constant(F::one(), self.prec));
        let mut acc = Self::constant(F::one(), self.prec);
        let mut pw = Self::constant(F::one(), self.prec);
        let mut n = 1;
        loop {
            pw = pw.mul(&g).truncate(self.prec);
            if pw.is_zero() {
                break;
            }
            acc = acc.add(&pw.scale_q(&binomial_rational(alpha, n)));
            n += 1;
        }
        Ok(acc)
    }

    pub fn map<G: Ring>(&self, f: impl Fn(&F) -> G) -> Local<G> {
        Local::from_coeffs(self.val, self.coeffs.iter().map(f).collect(), self.prec)
    }

    /// Keep only exponents of the given parity.
    pub fn parity_part(&self, odd: bool) -> Self {
        Self::from_coeffs(
            self.val,
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    if ((self.val + i as i64).rem_euclid(2) == 1) == odd {
                        c.clone()
                    } else {
                        F::zero()
                    }
                })
                .collect(),
            self.prec,
        )
    }

    /// `f(-u)`.
    pub fn reflect(&self) -> Self {
        Self::from_coeffs(
            self.val,
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    if (self.val + i as i64).rem_euclid(2) == 1 {
                        c.neg_ref()
                    } else {
                        c.clone()
                    }
                })
                .collect(),
            self.prec,
        )
    }
}

impl<F: Ring> fmt::Display for Local<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (e, c) in self.terms() {
            write!(f, "({c})*u^{e} + ")?;
        }
        write!(f, "O(u^{})", self.prec)
    }
}

/// Compositional inverse of `s = c1 u + c2 u^2 + ...` to order `n`, computed
/// by Lagrange inversion: `[w^m] u(w) = (1/m) [u^(m-1)] (u/s(u))^m`.
pub fn local_series_inversion<F: Ring>(s: &Local<F>, n: i64) -> Result<Local<F>> {
    if s.val() != 1 {
        return Err(Error::NonUnit);
    }
    if s.prec() < n + 1 {
        return Err(Error::InsufficientOrder(format!(
            "inversion to order {n} needs input known below u^{}",
            n + 1
        )));
    }
    let phi = s.shift_val(-1).truncate(n).inv()?; // u / s(u)
    let mut pw = Local::constant(F::one(), n);
    let mut out = vec![F::zero(); n as usize + 1];
    for m in 1..=n {
        pw = pw.mul(&phi);
        out[m as usize] = pw.coeff(m - 1)?.scale(&Rational::new(1.into(), m.into()));
    }
    Ok(Local::from_coeffs(0, out, n + 1))
}
