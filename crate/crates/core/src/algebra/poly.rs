//! Dense univariate polynomials and rational functions over a field, with
//! Laurent expansion and residues at points of the field.

use std::fmt;

use super::local::Local;
use super::{Rational, Ring};
use crate::{Error, Result};

/// Coefficients stored low degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<F: Ring> {
    coeffs: Vec<F>,
}

impl<F: Ring> Poly<F> {
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    pub fn constant(c: F) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `t`.
    pub fn var() -> Self {
        Self::new(vec![F::zero(), F::one()])
    }

    /// `t - a`.
    pub fn linear_root(a: &F) -> Self {
        Self::new(vec![a.neg_ref(), F::one()])
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> F {
        self.coeffs.get(i).cloned().unwrap_or_else(F::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> F {
        self.coeffs.last().cloned().unwrap_or_else(F::zero)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i).add_ref(&o.coeff(i))).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i).sub_ref(&o.coeff(i))).collect())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.neg_ref()).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![F::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add_ref(&a.mul_ref(b));
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, c: &F) -> Self {
        Self::new(self.coeffs.iter().map(|x| x.mul_ref(c)).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(F::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval(&self, t: &F) -> F {
        self.coeffs
            .iter()
            .rev()
            .fold(F::zero(), |acc, c| acc.mul_ref(t).add_ref(c))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.scale(&super::int(i as i64)))
                .collect(),
        )
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("polynomial division by zero");
        let inv = d.lead().try_inv().expect("leading coefficient not invertible");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quo = vec![F::zero(); rem.len() - dd];
        for i in (0..quo.len()).rev() {
            let c = rem[i + dd].mul_ref(&inv);
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    rem[i + j] = rem[i + j].sub_ref(&c.mul_ref(dc));
                }
            }
            quo[i] = c;
        }
        rem.truncate(dd);
        (Self::new(quo), Self::new(rem))
    }

    pub fn monic(&self) -> Self {
        match self.lead().try_inv() {
            Some(inv) if !self.is_zero() => self.scale(&inv),
            _ => self.clone(),
        }
    }

    pub fn gcd(a: &Self, b: &Self) -> Self {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `p(t + a)`.
    pub fn shift(&self, a: &F) -> Self {
        let lin = Self::new(vec![a.clone(), F::one()]);
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, c| acc.mul(&lin).add(&Self::constant(c.clone())))
    }

    /// Multiplicity of `a` as a root and the cofactor.
    pub fn split_root(&self, a: &F) -> (usize, Self) {
        let mut m = 0;
        let mut p = self.clone();
        let lin = Self::linear_root(a);
        while !p.is_zero() && p.eval(a).is_zero() {
            p = p.divrem(&lin).0;
            m += 1;
        }
        (m, p)
    }

    /// Taylor expansion at `a` in the local coordinate `u = t - a`.
    pub fn local_at(&self, a: &F, prec: i64) -> Local<F> {
        let s = self.shift(a);
        Local::from_coeffs(0, s.coeffs.clone(), prec)
    }
}

impl<F: Ring> fmt::Display for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*t")?,
                _ => write!(f, "({c})*t^{i}")?,
            }
        }
        Ok(())
    }
}

/// Reduced quotient of polynomials with monic denominator.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalFunction<F: Ring> {
    num: Poly<F>,
    den: Poly<F>,
}

impl<F: Ring> RationalFunction<F> {
    pub fn new(num: Poly<F>, den: Poly<F>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::NonUnit);
        }
        if num.is_zero() {
            return Ok(Self::from_poly(Poly::zero()));
        }
        let g = Poly::gcd(&num, &den);
        let num = num.divrem(&g).0;
        let den = den.divrem(&g).0;
        let l = den.lead().try_inv().ok_or(Error::NonUnit)?;
        Ok(RationalFunction {
            num: num.scale(&l),
            den: den.scale(&l),
        })
    }

    pub fn from_poly(p: Poly<F>) -> Self {
        RationalFunction {
            num: p,
            den: Poly::constant(F::one()),
        }
    }

    pub fn constant(c: F) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    /// `c / (t - a)^m`.
    pub fn pole(c: F, a: &F, m: u32) -> Self {
        RationalFunction {
            num: Poly::constant(c),
            den: Poly::linear_root(a).pow(m),
        }
    }

    pub fn num(&self) -> &Poly<F> {
        &self.num
    }

    pub fn den(&self) -> &Poly<F> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return Self::new(self.num.add(&o.num), self.den.clone()).expect("nonzero denominator");
        }
        Self::new(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den)).expect("nonzero denominator")
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        RationalFunction {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(self.num.mul(&o.num), self.den.mul(&o.den)).expect("nonzero denominator")
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::from_poly(Poly::zero());
        }
        RationalFunction {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        if o.is_zero() {
            return Err(Error::NonUnit);
        }
        Self::new(self.num.mul(&o.den), self.den.mul(&o.num))
    }

    pub fn derivative(&self) -> Self {
        let n = self
            .num
            .derivative()
            .mul(&self.den)
            .sub(&self.num.mul(&self.den.derivative()));
        Self::new(n, self.den.mul(&self.den)).expect("nonzero denominator")
    }

    pub fn eval(&self, t: &F) -> Result<F> {
        let d = self.den.eval(t).try_inv().ok_or(Error::NonUnit)?;
        Ok(self.num.eval(t).mul_ref(&d))
    }

    /// Laurent expansion at `a` in `u = t - a`, known for exponents `< prec`.
    pub fn laurent_at(&self, a: &F, prec: i64) -> Local<F> {
        let (m, cof) = self.den.split_root(a);
        let m = m as i64;
        let rel = prec + m;
        let n = self.num.local_at(a, rel.max(0));
        let d = cof.local_at(a, rel.max(0));
        let q = n.div(&d).expect("cofactor nonvanishing at the point");
        q.shift_val(-m)
    }

    /// Residue of `f(t) dt` at `t = a`.
    pub fn residue(&self, a: &F) -> F {
        let (m, _) = self.den.split_root(a);
        if m == 0 {
            return F::zero();
        }
        self.laurent_at(a, 0).coeff(-1).expect("expanded to order 0")
    }

    /// Pole order at `a` (0 when regular).
    pub fn pole_order(&self, a: &F) -> usize {
        self.den.split_root(a).0
    }
}

impl<F: Ring> fmt::Display for RationalFunction<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

/// Convenience constructor over the rationals.
pub fn qpoly(c: &[i64]) -> Poly<Rational> {
    Poly::new(c.iter().map(|&x| super::int(x)).collect())
}
