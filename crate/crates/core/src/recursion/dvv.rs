//! Intersection numbers `<tau_{k_1} ... tau_{k_n}>_g` of psi classes from the
//! Dijkgraaf-Verlinde-Verlinde recursion.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use crate::algebra::{double_factorial_odd, int, rat, Rational, Ring};
use crate::{Error, Result};

type Key = (u32, Vec<u32>);

fn cache() -> &'static RwLock<HashMap<Key, Rational>> {
    static CACHE: OnceLock<RwLock<HashMap<Key, Rational>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// `<tau_{k_1} ... tau_{k_n}>_g`; zero off the dimension `3g - 3 + n`.
pub fn dvv_intersections(g: u32, ks: &[u32]) -> Result<Rational> {
    let n = ks.len();
    if n == 0 || 2 * g as i64 - 2 + n as i64 <= 0 {
        return Err(Error::Unstable(g, n));
    }
    Ok(intersection(g, ks))
}

/// Same as [`dvv_intersections`] but zero for unstable input.
pub fn intersection(g: u32, ks: &[u32]) -> Rational {
    let n = ks.len() as i64;
    if n == 0 || 2 * g as i64 - 2 + n <= 0 {
        return Rational::zero();
    }
    if ks.iter().map(|&k| k as i64).sum::<i64>() != 3 * g as i64 - 3 + n {
        return Rational::zero();
    }
    let mut key = ks.to_vec();
    key.sort_unstable_by(|a, b| b.cmp(a));
    if let Some(v) = cache().read().unwrap().get(&(g, key.clone())) {
        return v.clone();
    }
    let v = compute(g, &key);
    cache().write().unwrap().insert((g, key), v.clone());
    v
}

fn compute(g: u32, ks: &[u32]) -> Rational {
    // ks sorted descending; ks[0] is the largest
    if ks[0] == 0 {
        // dimension forces (g, n) = (0, 3)
        return int(1);
    }
    if g == 1 && ks == [1] {
        return rat(1, 24);
    }
    let k = ks[0] as i64 - 1;
    let rest = &ks[1..];
    let df = |m: i64| double_factorial_odd(m);
    let mut acc = Rational::zero();
    for (j, &d) in rest.iter().enumerate() {
        let d = d as i64;
        let mut v = rest.to_vec();
        v[j] = (d + k) as u32;
        acc += df(k + d + 1) / df(d) * intersection(g, &v);
    }
    let n_rest = rest.len();
    for a in 0..k {
        let b = k - 1 - a;
        let w = df(a + 1) * df(b + 1) / int(2);
        if g > 0 {
            let mut v = vec![a as u32, b as u32];
            v.extend_from_slice(rest);
            acc += w.clone() * intersection(g - 1, &v);
        }
        for mask in 0u64..(1u64 << n_rest) {
            let (mut left, mut right) = (vec![a as u32], vec![b as u32]);
            for (i, &d) in rest.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    left.push(d);
                } else {
                    right.push(d);
                }
            }
            for g1 in 0..=g {
                let x = intersection(g1, &left);
                if x.is_zero() {
                    continue;
                }
                acc += w.clone() * x * intersection(g - g1, &right);
            }
        }
    }
    acc / df(k + 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::factorial;
    use proptest::prelude::*;

    #[test]
    fn small_values() {
        assert_eq!(dvv_intersections(0, &[0, 0, 0]).unwrap(), int(1));
        assert_eq!(dvv_intersections(1, &[1]).unwrap(), rat(1, 24));
        assert_eq!(dvv_intersections(0, &[0, 2]).unwrap_err(), Error::Unstable(0, 2));
        assert_eq!(intersection(0, &[0, 0, 0, 2]), int(0));
        assert_eq!(intersection(2, &[4]), rat(1, 1152));
    }

    /// `<tau_{3g-2}>_g = 1 / (24^g g!)`.
    #[test]
    fn one_point_closed_form() {
        for g in 1..6u32 {
            let expect = Rational::new(1.into(), num_bigint::BigInt::from(24).pow(g) * factorial(g as u64));
            assert_eq!(intersection(g, &[3 * g - 2]), expect);
        }
    }

    /// `<tau_0^n>_0` with descendants: `<tau_{k_1}..tau_{k_n}>_0 = (n-3)! / prod k_i!`.
    #[test]
    fn genus_zero_multinomial() {
        let ks = [2u32, 1, 0, 0, 0, 0];
        let n = ks.len() as u64;
        let den: num_bigint::BigInt = ks.iter().map(|&k| factorial(k as u64)).product();
        assert_eq!(intersection(0, &ks), Rational::new(factorial(n - 3), den));
    }

    fn stable_input() -> impl Strategy<Value = (u32, Vec<u32>)> {
        (0u32..3, 1usize..5).prop_flat_map(|(g, n)| {
            let dim = 3 * g as i64 - 3 + n as i64;
            let n = if dim < 0 { 3 } else { n };
            let dim = (3 * g as i64 - 3 + n as i64) as u32;
            (Just(g), proptest::collection::vec(0..=dim, n - 1)).prop_map(move |(g, mut v)| {
                let used: u32 = v.iter().sum();
                if used > dim {
                    v.iter_mut().for_each(|x| *x = 0);
                }
                let used: u32 = v.iter().sum();
                v.push(dim - used);
                (g, v)
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn string_equation((g, ks) in stable_input()) {
            if ks.iter().all(|&k| k == 0) {
                return Ok(());
            }
            let mut with0 = ks.clone();
            with0.push(0);
            let mut rhs = Rational::zero();
            for j in 0..ks.len() {
                if ks[j] > 0 {
                    let mut v = ks.clone();
                    v[j] -= 1;
                    rhs += intersection(g, &v);
                }
            }
            prop_assert_eq!(intersection(g, &with0), rhs);
        }

        #[test]
        fn dilaton_equation((g, ks) in stable_input()) {
            let mut with1 = ks.clone();
            with1.push(1);
            let factor = int(2 * g as i64 - 2 + ks.len() as i64);
            prop_assert_eq!(intersection(g, &with1), factor * intersection(g, &ks));
        }

        #[test]
        fn symmetric((g, ks) in stable_input()) {
            let mut rev = ks.clone();
            rev.reverse();
            prop_assert_eq!(intersection(g, &ks), intersection(g, &rev));
        }
    }
}
