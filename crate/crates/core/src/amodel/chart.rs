//! The chart `[C^3 / Z_p]` at the fixed point carrying the Lagrangian:
//! sectors, ages, characters and the equivariant Chen-Ruan ring.

use std::collections::BTreeMap;

use crate::algebra::cyclo::Cyclo;
use crate::algebra::{int, rat, Rational, Ring, VLaurent};
use crate::curve::KnotParams;
use crate::{Error, Result};

/// Sector data of `Z_p` and the torus weights `w = (r/p, -k, s/p)`; the
/// equivariant weights are `sw_i = w_i v`.
#[derive(Clone, Debug, PartialEq)]
pub struct OrbifoldChartData {
    pub p: usize,
    pub weights: [Rational; 3],
}

impl OrbifoldChartData {
    pub fn new(params: &KnotParams) -> Self {
        let w = params.weights().map(|(n, d)| rat(n, d));
        OrbifoldChartData {
            p: params.p as usize,
            weights: w,
        }
    }

    /// Sector `h = zeta^j` as the fraction `j/p`.
    pub fn label(&self, j: usize) -> Rational {
        rat(j as i64, self.p as i64)
    }

    /// `(c_1, c_2, c_3)` of the sector `zeta^j`.
    pub fn c(&self, j: usize) -> [Rational; 3] {
        let j = j % self.p;
        let f = self.label(j);
        let c3 = if j == 0 { int(0) } else { int(1) - &f };
        [f, int(0), c3]
    }

    pub fn age(&self, j: usize) -> Rational {
        self.c(j).iter().sum()
    }

    /// `sum_i w_i`, zero on a Calabi-Yau chart.
    pub fn weight_sum(&self) -> Rational {
        self.weights.iter().sum()
    }

    /// `prod_i (w_i v)^{x_i}` for integer exponents, as a Laurent monomial in `v`.
    pub fn weight_power(&self, x: &[Rational; 3]) -> Result<VLaurent> {
        let mut c = int(1);
        let mut e = 0i64;
        for (w, xi) in self.weights.iter().zip(x) {
            if !xi.is_integer() {
                return Err(Error::Incompatible(format!("fractional weight exponent {xi}")));
            }
            let n: i64 = xi
                .to_integer()
                .try_into()
                .map_err(|_| Error::Incompatible("huge exponent".into()))?;
            c *= w.pow_i(n).ok_or(Error::NonUnit)?;
            e += n;
        }
        Ok(VLaurent::monomial(c, e))
    }
}

/// Characters `chi_a(zeta^j) = omega^(a j)` of `Z_p`, exact in `Q(omega)`.
#[derive(Clone, Copy, Debug)]
pub struct CharacterTable {
    pub p: usize,
}

impl CharacterTable {
    pub fn chi(&self, alpha: usize, j: i64) -> Cyclo {
        Cyclo::root_power(self.p, alpha as i64 * j)
    }

    /// `(1/p) sum_h chi_a(h) chi_b(h^{-1})`.
    pub fn inner(&self, a: usize, b: usize) -> Cyclo {
        let mut acc = Cyclo::zero();
        for j in 0..self.p as i64 {
            acc = acc.add_ref(&self.chi(a, j).mul_ref(&self.chi(b, -j)));
        }
        acc.scale(&rat(1, self.p as i64))
    }
}

/// Pairing and product of two sector classes `1_h, 1_h'`.
#[derive(Clone, Debug, PartialEq)]
pub struct CrStructure {
    /// `<1_h, 1_h'>`, zero unless `h h' = 1`.
    pub pairing: VLaurent,
    /// Sector of `1_h * 1_h'`.
    pub product_sector: usize,
    /// Exponents `c_i(h) + c_i(h') - c_i(h h')` of `sw_i` in the product.
    pub product_exponents: [Rational; 3],
}

pub fn cr_ring_data(chart: &OrbifoldChartData, h: usize, hp: usize) -> Result<CrStructure> {
    let p = chart.p;
    if h >= p || hp >= p {
        return Err(Error::InvalidParams(format!("sector out of range for p = {p}")));
    }
    let prod = (h + hp) % p;
    let pairing = if prod == 0 {
        let c = chart.c(h);
        let x = c.map(|ci| if ci.is_zero() { int(-1) } else { int(0) });
        chart.weight_power(&x)?.scale(&rat(1, p as i64))
    } else {
        VLaurent::zero()
    };
    let (a, b, ab) = (chart.c(h), chart.c(hp), chart.c(prod));
    let e = [0, 1, 2].map(|i| &a[i] + &b[i] - &ab[i]);
    Ok(CrStructure {
        pairing,
        product_sector: prod,
        product_exponents: e,
    })
}

/// Element of the chart's ring: `sum c * prod sw_i^{x_i} 1_h`, keyed by
/// `(h, x)` with possibly fractional `x`.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct CrElement {
    terms: BTreeMap<(usize, [Rational; 3]), Cyclo>,
}

impl CrElement {
    fn add_term(&mut self, key: (usize, [Rational; 3]), c: Cyclo) {
        let s = self.terms.get(&key).cloned().unwrap_or_else(Cyclo::zero).add_ref(&c);
        if s.is_zero() {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, s);
        }
    }

    /// `1_h / prod sw_i^{c_i(h)}`.
    pub fn bar_unit(chart: &OrbifoldChartData, h: usize) -> Self {
        let mut out = CrElement::default();
        out.add_term((h, chart.c(h).map(|c| -c)), Cyclo::one());
        out
    }

    /// `(1/p) sum_h chi_g(h^{-1}) bar 1_h`.
    pub fn canonical(chart: &OrbifoldChartData, gamma: usize) -> Self {
        let ch = CharacterTable { p: chart.p };
        let mut out = CrElement::default();
        for h in 0..chart.p {
            let c = ch.chi(gamma, -(h as i64)).scale(&rat(1, chart.p as i64));
            out.add_term((h, chart.c(h).map(|c| -c)), c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn star(&self, o: &Self, chart: &OrbifoldChartData) -> Result<Self> {
        let mut out = CrElement::default();
        for ((h1, x1), c1) in &self.terms {
            for ((h2, x2), c2) in &o.terms {
                let s = cr_ring_data(chart, *h1, *h2)?;
                let x = [0, 1, 2].map(|i| &x1[i] + &x2[i] + &s.product_exponents[i]);
                out.add_term((s.product_sector, x), c1.mul_ref(c2));
            }
        }
        Ok(out)
    }

    /// Bilinear pairing; every term must combine to integer weight powers.
    pub fn pair(&self, o: &Self, chart: &OrbifoldChartData) -> Result<(Cyclo, VLaurent)> {
        // all surviving terms share one v-monomial for homogeneous inputs
        let mut acc: BTreeMap<i64, (Cyclo, Rational)> = BTreeMap::new();
        for ((h1, x1), c1) in &self.terms {
            for ((h2, x2), c2) in &o.terms {
                let s = cr_ring_data(chart, *h1, *h2)?;
                if s.pairing.is_zero() {
                    continue;
                }
                let w = chart
                    .weight_power(&[0, 1, 2].map(|i| &x1[i] + &x2[i]))?
                    .mul_ref(&s.pairing);
                for (e, r) in w.terms() {
                    let slot = acc.entry(*e).or_insert_with(|| (Cyclo::zero(), int(1)));
                    slot.0 = slot.0.add_ref(&c1.mul_ref(c2).scale(r));
                }
            }
        }
        acc.retain(|_, v| !v.0.is_zero());
        match acc.len() {
            0 => Ok((Cyclo::zero(), VLaurent::zero())),
            1 => {
                let (e, (c, _)) = acc.into_iter().next().expect("one entry");
                Ok((c, VLaurent::monomial(int(1), e)))
            }
            _ => Err(Error::Incompatible("inhomogeneous pairing".into())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn charts() -> Vec<OrbifoldChartData> {
        [(1, 1, 1), (2, 3, 1), (3, 1, 2), (5, 2, 3)]
            .iter()
            .map(|&(p, r, s)| OrbifoldChartData::new(&KnotParams::new(p, r, s).unwrap()))
            .collect()
    }

    #[test]
    fn sectors_and_weights() {
        for ch in charts() {
            assert!(ch.weight_sum().is_zero());
            for j in 0..ch.p {
                let c = ch.c(j);
                let s = &c[0] + &c[2];
                assert!(s.is_zero() || s == int(1));
                assert_eq!(ch.age(j), if j == 0 { int(0) } else { int(1) });
            }
        }
    }

    #[test]
    fn identity_pairing() {
        for ch in charts() {
            let s = cr_ring_data(&ch, 0, 0).unwrap();
            let w = &ch.weights;
            let expect = (int(1) / (int(ch.p as i64) * &w[0] * &w[1] * &w[2])).clone();
            assert_eq!(s.pairing, VLaurent::monomial(expect, -3));
            for h in 0..ch.p {
                let inv = (ch.p - h) % ch.p;
                let e = cr_ring_data(&ch, h, inv).unwrap().product_exponents;
                assert!(e.iter().all(|x| x.is_zero() || *x == int(1)));
            }
        }
    }

    #[test]
    fn canonical_basis_is_idempotent() {
        for ch in charts() {
            let w = &ch.weights;
            let norm = int(1) / (int((ch.p * ch.p) as i64) * &w[0] * &w[1] * &w[2]);
            for g in 0..ch.p {
                for gp in 0..ch.p {
                    let a = CrElement::canonical(&ch, g);
                    let b = CrElement::canonical(&ch, gp);
                    let prod = a.star(&b, &ch).unwrap();
                    if g == gp {
                        assert_eq!(prod, a, "p = {} gamma = {g}", ch.p);
                    } else {
                        assert!(prod.is_zero());
                    }
                    let (c, v) = a.pair(&b, &ch).unwrap();
                    if g == gp {
                        assert_eq!(c.as_rational(), Some(norm.clone()));
                        assert_eq!(v, VLaurent::monomial(int(1), -3));
                    } else {
                        assert!(c.is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn bar_units_multiply_as_group() {
        let ch = OrbifoldChartData::new(&KnotParams::new(5, 2, 3).unwrap());
        for a in 0..5 {
            for b in 0..5 {
                let prod = CrElement::bar_unit(&ch, a)
                    .star(&CrElement::bar_unit(&ch, b), &ch)
                    .unwrap();
                assert_eq!(prod, CrElement::bar_unit(&ch, (a + b) % 5));
            }
        }
    }
}
