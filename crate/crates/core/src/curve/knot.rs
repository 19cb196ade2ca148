//! Torus-knot and framing data `(p, r, s, k, gamma, delta)`.

use num_integer::Integer;
use serde::Serialize;

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct KnotParams {
    pub p: i64,
    pub r: i64,
    pub s: i64,
    pub k: i64,
    pub gamma: i64,
    pub delta: i64,
}

impl KnotParams {
    /// Validate `(p, r, s)` and complete the framing matrix
    /// `[[r, -k], [gamma, delta]]` in `SL(2, Z)` with the smallest `gamma >= 0`.
    pub fn new(p: i64, r: i64, s: i64) -> Result<Self> {
        if p <= 0 || r <= 0 || s <= 0 {
            return Err(Error::InvalidParams(format!(
                "p, r, s must be positive, got ({p}, {r}, {s})"
            )));
        }
        if (r + s) % p != 0 {
            return Err(Error::InvalidParams("r+s not divisible by p".into()));
        }
        for (a, b, na, nb) in [(p, r, "p", "r"), (p, s, "p", "s"), (r, s, "r", "s")] {
            if a.gcd(&b) != 1 {
                return Err(Error::InvalidParams(format!("{na} and {nb} are not coprime")));
            }
        }
        let k = (r + s) / p;
        // k gamma = 1 mod r
        let gamma = (0..r.max(1))
            .find(|g| (k * g - 1).rem_euclid(r) == 0)
            .ok_or_else(|| Error::InvalidParams("r and k are not coprime".into()))?;
        let delta = (1 - k * gamma) / r;
        Ok(KnotParams {
            p,
            r,
            s,
            k,
            gamma,
            delta,
        })
    }

    /// Torus weights `(w1, w2, w3) = (r/p, -k, s/p)` as `(numerator, denominator)`.
    pub fn weights(&self) -> [(i64, i64); 3] {
        [(self.r, self.p), (-self.k, 1), (self.s, self.p)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let a = KnotParams::new(1, 2, 1).unwrap();
        assert_eq!((a.k, a.gamma, a.delta), (3, 1, -1));
        let b = KnotParams::new(3, 1, 2).unwrap();
        assert_eq!((b.k, b.gamma, b.delta), (1, 0, 1));
        let e = KnotParams::new(2, 1, 2).unwrap_err();
        assert_eq!(e, Error::InvalidParams("r+s not divisible by p".into()));
        assert!(KnotParams::new(2, 2, 4).is_err());
        for (p, r, s) in [(1, 1, 1), (2, 3, 1), (5, 2, 3)] {
            let kp = KnotParams::new(p, r, s).unwrap();
            assert_eq!(kp.r * kp.delta + kp.k * kp.gamma, 1);
        }
    }
}
