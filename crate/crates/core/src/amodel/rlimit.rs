//! Bernoulli polynomials and the `q -> 0` limit of the A-model `R`-matrix at
//! the chart `[C^3 / Z_p]`.

use std::sync::{Arc, OnceLock, RwLock};

use serde::Serialize;

use super::chart::{CharacterTable, OrbifoldChartData};
use crate::algebra::cyclo::Cyclo;
use crate::algebra::series::{Series, SeriesRing};
use crate::algebra::{binomial, int, rat, Rational, Ring};
use crate::Result;

fn bernoulli_numbers() -> &'static RwLock<Vec<Rational>> {
    static B: OnceLock<RwLock<Vec<Rational>>> = OnceLock::new();
    B.get_or_init(|| RwLock::new(vec![int(1)]))
}

/// `B_m = B_m(0)`, with `B_1 = -1/2`.
pub fn bernoulli_number(m: usize) -> Rational {
    if let Some(b) = bernoulli_numbers().read().unwrap().get(m) {
        return b.clone();
    }
    let mut table = bernoulli_numbers().write().unwrap();
    // sum_{k=0}^{n} C(n+1, k) B_k = 0
    while table.len() <= m {
        let n = table.len() as i64;
        let s: Rational = table
            .iter()
            .enumerate()
            .map(|(k, b)| binomial(n + 1, k as i64) * b)
            .sum();
        table.push(-s / int(n + 1));
    }
    table[m].clone()
}

/// `B_m(x)` from `t e^{tx} / (e^t - 1) = sum B_m(x) t^m / m!`.
pub fn bernoulli_polynomial(m: usize, x: &Rational) -> Rational {
    (0..=m)
        .map(|k| binomial(m as i64, k as i64) * bernoulli_number(k) * x.pow_u((m - k) as u64))
        .sum()
}

/// `lim R(z)` on one fixed point, indexed `[delta][gamma]` over characters.
/// The series variable is `z/v`: the `z^m` coefficient carries `v^{-m}`.
#[derive(Clone, Debug)]
pub struct RLimit {
    pub p: usize,
    pub z_order: u32,
    pub entries: Vec<Vec<Series<Cyclo>>>,
}

fn z_ring(n: u32) -> Arc<SeriesRing> {
    SeriesRing::new(&["z"], &[n]).build()
}

/// `prod_i exp( sum_m (-1)^m / (m(m+1)) B_{m+1}(c_i(h)) (z / w_i)^m )`.
pub fn sector_factor(chart: &OrbifoldChartData, j: usize, z_order: u32) -> Result<Series<Rational>> {
    let ring = z_ring(z_order);
    let c = chart.c(j);
    let mut exponent = Series::zero(&ring);
    for m in 1..=z_order as usize {
        let sign = if m % 2 == 0 { int(1) } else { int(-1) };
        let mut coef = int(0);
        for (ci, wi) in c.iter().zip(&chart.weights) {
            coef += bernoulli_polynomial(m + 1, ci) / wi.pow_u(m as u64);
        }
        exponent.add_term(vec![m as u32], sign * rat(1, (m * (m + 1)) as i64) * coef);
    }
    exponent.exp()
}

pub fn r_matrix_limit(chart: &OrbifoldChartData, z_order: u32) -> Result<RLimit> {
    let p = chart.p;
    let ch = CharacterTable { p };
    let factors: Vec<Series<Cyclo>> = (0..p)
        .map(|j| sector_factor(chart, j, z_order).map(|s| s.map(|_, c| Cyclo::from_rational(c))))
        .collect::<Result<_>>()?;
    let ring = z_ring(z_order);
    let mut entries = vec![vec![Series::zero(&ring); p]; p];
    for (d, row) in entries.iter_mut().enumerate() {
        for (g, slot) in row.iter_mut().enumerate() {
            for (j, f) in factors.iter().enumerate() {
                let c = ch
                    .chi(d, j as i64)
                    .mul_ref(&ch.chi(g, -(j as i64)))
                    .scale(&rat(1, p as i64));
                *slot = slot.add(&f.scale(&c))?;
            }
        }
    }
    Ok(RLimit { p, z_order, entries })
}

impl RLimit {
    /// `z^m` coefficient of entry `[d][g]`.
    pub fn coeff(&self, d: usize, g: usize, m: u32) -> Cyclo {
        self.entries[d][g].coeff(&[m])
    }

    /// First `(a, c, m, value)` where `sum_b R_{ba}(-z) R_{bc}(z) - delta_{ac}`
    /// is nonzero at `z^m`.
    pub fn unitarity_defect(&self) -> Option<(usize, usize, u32, Cyclo)> {
        let p = self.p;
        let reflect = |s: &Series<Cyclo>| s.map(|e, c| if e[0] % 2 == 1 { c.neg_ref() } else { c.clone() });
        for a in 0..p {
            for c in 0..p {
                let mut acc = Series::zero(self.entries[0][0].ring());
                for b in 0..p {
                    acc = acc
                        .add(
                            &reflect(&self.entries[b][a])
                                .mul(&self.entries[b][c])
                                .expect("same ring"),
                        )
                        .expect("same ring");
                }
                for m in 0..=self.z_order {
                    let mut v = acc.coeff(&[m]);
                    if m == 0 && a == c {
                        v = v.sub_ref(&Cyclo::one());
                    }
                    if !v.is_zero() {
                        return Some((a, c, m, v));
                    }
                }
            }
        }
        None
    }

    pub fn to_json(&self) -> RLimitJson {
        let entries = self
            .entries
            .iter()
            .map(|row| {
                row.iter()
                    .map(|s| (0..=self.z_order).map(|m| s.coeff(&[m]).to_string()).collect())
                    .collect()
            })
            .collect();
        RLimitJson {
            p: self.p,
            z_order: self.z_order,
            variable: "z/v".into(),
            entries,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RLimitJson {
    pub p: usize,
    pub z_order: u32,
    pub variable: String,
    /// `entries[delta][gamma][m]`, cyclotomic values written in powers of `w = exp(2 pi i / p)`.
    pub entries: Vec<Vec<Vec<String>>>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::factorial;
    use crate::curve::KnotParams;

    /// Expand `t e^{tx} / (e^t - 1)` directly as a series.
    fn bernoulli_oracle(n: u32, x: &Rational) -> Vec<Rational> {
        let ring = SeriesRing::new(&["t"], &[n + 1]).build();
        let t = Series::<Rational>::var(&ring, 0);
        let num = t.scale_q(x).exp().unwrap();
        // (e^t - 1)/t = sum t^m / (m+1)!
        let mut den = Series::zero(&ring);
        for m in 0..=n + 1 {
            den.add_term(vec![m], Rational::new(1.into(), factorial(m as u64 + 1)));
        }
        let f = num.div(&den).unwrap();
        (0..=n)
            .map(|m| f.coeff(&[m]) * Rational::from_integer(factorial(m as u64)))
            .collect()
    }

    #[test]
    fn bernoulli_values() {
        assert_eq!(bernoulli_polynomial(0, &rat(3, 7)), int(1));
        assert_eq!(bernoulli_polynomial(1, &rat(1, 2)), int(0));
        assert_eq!(bernoulli_polynomial(2, &int(0)), rat(1, 6));
        for x in [int(0), rat(1, 3), rat(-2, 5), int(1)] {
            let o = bernoulli_oracle(8, &x);
            for (m, v) in o.iter().enumerate() {
                assert_eq!(&bernoulli_polynomial(m, &x), v, "B_{m}({x})");
            }
        }
    }

    #[test]
    fn limit_is_unitary_with_identity_start() {
        for (p, r, s) in [(1, 1, 1), (2, 3, 1), (3, 1, 2), (5, 2, 3)] {
            let chart = OrbifoldChartData::new(&KnotParams::new(p, r, s).unwrap());
            let rl = r_matrix_limit(&chart, 5).unwrap();
            for d in 0..chart.p {
                for g in 0..chart.p {
                    let expect = if d == g { Cyclo::one() } else { Cyclo::zero() };
                    assert_eq!(rl.coeff(d, g, 0), expect);
                }
            }
            assert_eq!(rl.unitarity_defect(), None, "p = {p}");
        }
    }

    #[test]
    fn p1_log_entry() {
        // log R = sum_m (-1)^m B_{m+1}(0) / (m(m+1)) sum_i (z/w_i)^m
        let chart = OrbifoldChartData::new(&KnotParams::new(1, 1, 1).unwrap());
        let rl = r_matrix_limit(&chart, 3).unwrap();
        let sum_inv: Rational = chart.weights.iter().map(|w| int(1) / w).sum();
        // z^1: -B_2 / 2 * sum 1/w_i
        assert_eq!(rl.coeff(0, 0, 1).as_rational(), Some(-rat(1, 12) * sum_inv));
    }
}
