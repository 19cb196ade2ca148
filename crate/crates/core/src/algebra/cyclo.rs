//! Exact arithmetic in the cyclotomic field `Q(omega)`, `omega = exp(2 pi i / p)`.
//!
//! Elements are kept as vectors over the basis `1, omega, ..., omega^(p-1)`
//! (the group algebra of `Z/p`), multiplied cyclically, and compared after
//! reduction modulo the `p`-th cyclotomic polynomial.

use std::fmt;

use super::poly::Poly;
use super::{Rational, Ring};

#[derive(Clone, Debug)]
pub struct Cyclo {
    /// `p = 0` marks a plain rational stored in `c[0]`.
    p: usize,
    c: Vec<Rational>,
}

impl Cyclo {
    /// `omega^j` in `Q(omega_p)`.
    pub fn root_power(p: usize, j: i64) -> Self {
        let mut c = vec![<Rational as Ring>::zero(); p];
        c[j.rem_euclid(p as i64) as usize] = <Rational as Ring>::one();
        Cyclo { p, c }
    }

    fn scalar(r: Rational) -> Self {
        Cyclo { p: 0, c: vec![r] }
    }

    fn lift(&self, p: usize) -> Vec<Rational> {
        if self.p == p {
            return self.c.clone();
        }
        debug_assert_eq!(self.p, 0, "mixing cyclotomic fields");
        let mut c = vec![<Rational as Ring>::zero(); p];
        c[0] = self.c[0].clone();
        c
    }

    fn common(&self, o: &Self) -> usize {
        self.p.max(o.p)
    }

    /// Canonical coordinates: remainder modulo the cyclotomic polynomial.
    pub fn reduced(&self) -> Vec<Rational> {
        if self.p <= 1 {
            let s = self.c.iter().fold(<Rational as Ring>::zero(), |a, x| a + x);
            return if Ring::is_zero(&s) { vec![] } else { vec![s] };
        }
        let poly = Poly::new(self.c.clone());
        poly.divrem(&cyclotomic_poly(self.p)).1.coeffs().to_vec()
    }

    /// The rational value, if the element lies in `Q`.
    pub fn as_rational(&self) -> Option<Rational> {
        let r = self.reduced();
        match r.len() {
            0 => Some(<Rational as Ring>::zero()),
            1 => Some(r[0].clone()),
            _ => None,
        }
    }
}

/// The `n`-th cyclotomic polynomial over `Q`.
pub fn cyclotomic_poly(n: usize) -> Poly<Rational> {
    let mut c = vec![<Rational as Ring>::zero(); n + 1];
    c[0] = super::int(-1);
    c[n] = super::int(1);
    let mut p = Poly::new(c);
    for d in 1..n {
        if n % d == 0 {
            p = p.divrem(&cyclotomic_poly(d)).0;
        }
    }
    p
}

impl PartialEq for Cyclo {
    fn eq(&self, o: &Self) -> bool {
        self.sub_ref(o).reduced().is_empty()
    }
}

impl fmt::Display for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.reduced();
        if r.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = r
            .iter()
            .enumerate()
            .filter(|(_, c)| !Ring::is_zero(*c))
            .map(|(j, c)| if j == 0 { format!("{c}") } else { format!("{c}*w^{j}") })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Ring for Cyclo {
    fn zero() -> Self {
        Cyclo::scalar(<Rational as Ring>::zero())
    }
    fn one() -> Self {
        Cyclo::scalar(<Rational as Ring>::one())
    }
    fn is_zero(&self) -> bool {
        self.reduced().is_empty()
    }
    fn add_ref(&self, o: &Self) -> Self {
        let p = self.common(o);
        if p == 0 {
            return Cyclo::scalar(&self.c[0] + &o.c[0]);
        }
        let (a, b) = (self.lift(p), o.lift(p));
        Cyclo {
            p,
            c: a.iter().zip(&b).map(|(x, y)| x + y).collect(),
        }
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self.add_ref(&o.neg_ref())
    }
    fn mul_ref(&self, o: &Self) -> Self {
        let p = self.common(o);
        if p == 0 {
            return Cyclo::scalar(&self.c[0] * &o.c[0]);
        }
        let (a, b) = (self.lift(p), o.lift(p));
        let mut c = vec![<Rational as Ring>::zero(); p];
        for (i, x) in a.iter().enumerate() {
            if Ring::is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                c[(i + j) % p] += x * y;
            }
        }
        Cyclo { p, c }
    }
    fn neg_ref(&self) -> Self {
        Cyclo {
            p: self.p,
            c: self.c.iter().map(|x| -x).collect(),
        }
    }
    fn try_inv(&self) -> Option<Self> {
        let r = self.as_rational()?;
        r.try_inv().map(Cyclo::scalar)
    }
    fn from_rational(r: &Rational) -> Self {
        Cyclo::scalar(r.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::int;

    #[test]
    fn roots_of_unity() {
        for p in 1..8 {
            let sum = (0..p as i64).fold(Cyclo::zero(), |a, j| a.add_ref(&Cyclo::root_power(p, j)));
            let expect = if p == 1 { Cyclo::one() } else { Cyclo::zero() };
            assert_eq!(sum, expect, "p = {p}");
            let w = Cyclo::root_power(p, 1);
            assert!(w.pow_u(p as u64).is_one());
        }
        assert_eq!(cyclotomic_poly(6), Poly::new(vec![int(1), int(-1), int(1)]));
    }
}
