//! Quadratic extensions `F(sqrt d)`, stacked to build the number fields in
//! which the ramification data lives.

use std::fmt;
use std::sync::Arc;

use super::{Rational, Ring};

/// Element `a + b sqrt(d)`. When `b` is nonzero the radicand is always
/// recorded; zero and one carry no radicand so they can be built without
/// knowing the field.
#[derive(Clone, Debug)]
pub struct QuadExt<F: Ring> {
    pub a: F,
    pub b: F,
    pub d: Option<Arc<F>>,
}

impl<F: Ring> QuadExt<F> {
    pub fn new(a: F, b: F, d: Arc<F>) -> Self {
        if b.is_zero() {
            Self::base(a)
        } else {
            QuadExt { a, b, d: Some(d) }
        }
    }

    pub fn base(a: F) -> Self {
        QuadExt {
            a,
            b: F::zero(),
            d: None,
        }
    }

    /// The generator `sqrt d` itself.
    pub fn sqrt_of(d: F) -> Self {
        QuadExt {
            a: F::zero(),
            b: F::one(),
            d: Some(Arc::new(d)),
        }
    }

    fn radicand(&self, other: &Self) -> Option<Arc<F>> {
        match (&self.d, &other.d) {
            (Some(x), Some(y)) => {
                debug_assert!(Arc::ptr_eq(x, y) || x == y, "mixing quadratic extensions");
                Some(x.clone())
            }
            (Some(x), None) | (None, Some(x)) => Some(x.clone()),
            (None, None) => None,
        }
    }

    pub fn conj(&self) -> Self {
        QuadExt {
            a: self.a.clone(),
            b: self.b.neg_ref(),
            d: self.d.clone(),
        }
    }

    pub fn norm(&self) -> F {
        match &self.d {
            None => self.a.mul_ref(&self.a),
            Some(d) => self.a.mul_ref(&self.a).sub_ref(&self.b.mul_ref(&self.b).mul_ref(d)),
        }
    }

    /// The base-field part when the element lies in the base field.
    pub fn as_base(&self) -> Option<&F> {
        if self.b.is_zero() {
            Some(&self.a)
        } else {
            None
        }
    }

    fn make(a: F, b: F, d: Option<Arc<F>>) -> Self {
        if b.is_zero() {
            Self::base(a)
        } else {
            QuadExt { a, b, d }
        }
    }
}

impl<F: Ring> PartialEq for QuadExt<F> {
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a && self.b == other.b
    }
}

impl<F: Ring> fmt::Display for QuadExt<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.d {
            Some(d) if !self.b.is_zero() => write!(f, "({})+({})*sqrt({})", self.a, self.b, d),
            _ => write!(f, "{}", self.a),
        }
    }
}

impl<F: Ring> Ring for QuadExt<F> {
    fn zero() -> Self {
        Self::base(F::zero())
    }
    fn one() -> Self {
        Self::base(F::one())
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
    fn add_ref(&self, o: &Self) -> Self {
        Self::make(self.a.add_ref(&o.a), self.b.add_ref(&o.b), self.radicand(o))
    }
    fn sub_ref(&self, o: &Self) -> Self {
        Self::make(self.a.sub_ref(&o.a), self.b.sub_ref(&o.b), self.radicand(o))
    }
    fn mul_ref(&self, o: &Self) -> Self {
        let d = self.radicand(o);
        let mut a = self.a.mul_ref(&o.a);
        if let Some(dd) = &d {
            if !self.b.is_zero() && !o.b.is_zero() {
                a = a.add_ref(&self.b.mul_ref(&o.b).mul_ref(dd));
            }
        }
        let b = self.a.mul_ref(&o.b).add_ref(&self.b.mul_ref(&o.a));
        Self::make(a, b, d)
    }
    fn neg_ref(&self) -> Self {
        QuadExt {
            a: self.a.neg_ref(),
            b: self.b.neg_ref(),
            d: self.d.clone(),
        }
    }
    fn try_inv(&self) -> Option<Self> {
        let n = self.norm().try_inv()?;
        Some(Self::make(
            self.a.mul_ref(&n),
            self.b.neg_ref().mul_ref(&n),
            self.d.clone(),
        ))
    }
    fn from_rational(r: &Rational) -> Self {
        Self::base(F::from_rational(r))
    }
    fn scale(&self, r: &Rational) -> Self {
        Self::make(self.a.scale(r), self.b.scale(r), self.d.clone())
    }
}
