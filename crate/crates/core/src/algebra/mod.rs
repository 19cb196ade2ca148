//! Exact arithmetic: rationals, quadratic extensions, polynomials,
//! truncated multivariate series and local Laurent expansions.

pub mod cyclo;
pub mod io;
pub mod local;
pub mod newton;
pub mod poly;
pub mod quad;
pub mod series;
pub mod vlaurent;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub use local::Local;
pub use poly::{Poly, RationalFunction};
pub use quad::QuadExt;
pub use series::{Series, SeriesRing};
pub use vlaurent::VLaurent;

pub type Rational = BigRational;

/// Commutative ring with (partial) inversion. Every coefficient type used by
/// the series machinery implements this.
pub trait Ring: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    /// Multiplicative inverse, `None` for non-units.
    fn try_inv(&self) -> Option<Self>;
    fn from_rational(r: &Rational) -> Self;

    fn from_i64(n: i64) -> Self {
        Self::from_rational(&rat(n, 1))
    }
    fn is_one(&self) -> bool {
        *self == Self::one()
    }
    fn scale(&self, r: &Rational) -> Self {
        self.mul_ref(&Self::from_rational(r))
    }
    fn pow_u(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_ref(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_ref(&base);
            }
        }
        acc
    }
    fn pow_i(&self, e: i64) -> Option<Self> {
        if e >= 0 {
            Some(self.pow_u(e as u64))
        } else {
            self.try_inv().map(|x| x.pow_u((-e) as u64))
        }
    }
}

impl Ring for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn try_inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// (2n-1)!! with the conventions (-1)!! = 1 and (-3)!! = -1.
pub fn double_factorial_odd(n: i64) -> Rational {
    // value of (2n-1)!!
    if n >= 0 {
        let mut acc = int(1);
        let mut k = 2 * n - 1;
        while k > 1 {
            acc *= int(k);
            k -= 2;
        }
        acc
    } else {
        // (2n-1)!! = (2n+1)!! / (2n+1)
        double_factorial_odd(n + 1) / int(2 * n + 1)
    }
}

/// Parse "a", "a/b" or "-a/b" into a rational.
pub fn parse_rational(s: &str) -> crate::Result<Rational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n
        .parse()
        .map_err(|_| crate::Error::Parse(format!("bad rational {s:?}")))?;
    let d: BigInt = d
        .parse()
        .map_err(|_| crate::Error::Parse(format!("bad rational {s:?}")))?;
    if Zero::is_zero(&d) {
        return Err(crate::Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(n, d))
}

/// Exact rational square root when it exists.
pub fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

pub fn binomial(n: i64, k: i64) -> Rational {
    if k < 0 || k > n {
        return int(0);
    }
    let mut acc = int(1);
    for i in 0..k {
        acc = acc * int(n - i) / int(i + 1);
    }
    acc
}

/// Generalized binomial coefficient `alpha choose n`.
pub fn binomial_rational(alpha: &Rational, n: u64) -> Rational {
    let mut acc = int(1);
    for i in 0..n {
        acc = acc * (alpha - int(i as i64)) / int(i as i64 + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn double_factorials() {
        assert_eq!(double_factorial_odd(0), int(1));
        assert_eq!(double_factorial_odd(-1), int(-1));
        assert_eq!(double_factorial_odd(3), int(15));
    }

    #[test]
    fn parses_rationals() {
        assert_eq!(parse_rational("1/7").unwrap(), rat(1, 7));
        assert_eq!(parse_rational("-3").unwrap(), int(-3));
        assert!(parse_rational("1/0").is_err());
        assert_eq!(rational_sqrt(&rat(9, 4)), Some(rat(3, 2)));
        assert_eq!(rational_sqrt(&rat(2, 1)), None);
    }
}
