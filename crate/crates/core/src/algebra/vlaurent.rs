//! Laurent polynomials in the equivariant parameter `v`.

use std::collections::BTreeMap;
use std::fmt;

use super::{Rational, Ring};

#[derive(Clone, Debug, PartialEq, Default)]
pub struct VLaurent {
    terms: BTreeMap<i64, Rational>,
}

impl VLaurent {
    pub fn monomial(c: Rational, e: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !Ring::is_zero(&c) {
            terms.insert(e, c);
        }
        VLaurent { terms }
    }

    pub fn coeff(&self, e: i64) -> Rational {
        self.terms.get(&e).cloned().unwrap_or_else(<Rational as Ring>::zero)
    }

    pub fn terms(&self) -> &BTreeMap<i64, Rational> {
        &self.terms
    }

    /// The value when it is a constant (no `v` dependence).
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(<Rational as Ring>::zero()),
            1 => self.terms.get(&0).cloned(),
            _ => None,
        }
    }

    /// Specialize `v = 1`.
    pub fn at_one(&self) -> Rational {
        self.terms.values().fold(<Rational as Ring>::zero(), |a, c| a + c)
    }

    fn insert(&mut self, e: i64, c: Rational) {
        let s = self.coeff(e) + c;
        if Ring::is_zero(&s) {
            self.terms.remove(&e);
        } else {
            self.terms.insert(e, s);
        }
    }
}

impl fmt::Display for VLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| if *e == 0 { format!("{c}") } else { format!("{c}*v^{e}") })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Ring for VLaurent {
    fn zero() -> Self {
        VLaurent::default()
    }
    fn one() -> Self {
        VLaurent::monomial(<Rational as Ring>::one(), 0)
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add_ref(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.insert(*e, c.clone());
        }
        out
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self.add_ref(&o.neg_ref())
    }
    fn mul_ref(&self, o: &Self) -> Self {
        let mut out = VLaurent::default();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                out.insert(e1 + e2, c1 * c2);
            }
        }
        out
    }
    fn neg_ref(&self) -> Self {
        VLaurent {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
    fn try_inv(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (e, c) = self.terms.iter().next()?;
        Some(VLaurent::monomial(c.recip(), -e))
    }
    fn from_rational(r: &Rational) -> Self {
        VLaurent::monomial(r.clone(), 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{int, rat};

    #[test]
    fn laurent_arithmetic() {
        let v = VLaurent::monomial(int(1), 1);
        let vi = v.try_inv().unwrap();
        assert!(v.mul_ref(&vi).is_one());
        let f = v.add_ref(&VLaurent::from_i64(2));
        assert!(f.try_inv().is_none());
        assert_eq!(f.mul_ref(&vi).at_one(), int(3));
        assert_eq!(VLaurent::monomial(rat(3, 4), 0).as_constant(), Some(rat(3, 4)));
        assert_eq!(f.as_constant(), None);
    }
}
