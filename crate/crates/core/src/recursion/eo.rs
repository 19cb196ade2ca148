//! Eynard-Orantin recursion on a genus-zero spectral curve, with every
//! `omega_{g,n}` kept in the basis of products of `eta^j_s` forms.
//!
//! `omega_{0,2}(zeta, p) = sum_j eta^j_s(p) zeta^j d zeta` near `P_s`, so the
//! open slots of every term are `eta` forms. Odd `j` may appear in
//! intermediate terms and must cancel in the result.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{double_factorial_odd, int, Local, Rational, Ring};
use crate::curve::spectral::SpectralCurveModel;
use crate::curve::theta::{bergman_local, theta_factor, FormExpander};
use crate::{Error, Result};

/// Per-slot `(point, j)` indices of a product of `eta^j` forms.
pub type EtaKey = Vec<(usize, usize)>;

/// `omega_{g,n} = sum c[key] prod_i eta^{j_i}_{s_i}(p_i)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Multidifferential<F: Ring> {
    pub g: u32,
    pub n: usize,
    pub terms: BTreeMap<EtaKey, F>,
}

/// `omega_{g,n}` in the `theta^d` basis: keys are per-slot `(point, d)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ThetaExpansion<F: Ring> {
    pub g: u32,
    pub n: usize,
    pub terms: BTreeMap<Vec<(usize, usize)>, F>,
}

#[derive(Serialize)]
struct TermJson {
    idx: Vec<[usize; 2]>,
    coeff: String,
}

#[derive(Serialize)]
struct ThetaJson {
    g: u32,
    n: usize,
    terms: Vec<TermJson>,
}

impl<F: Ring> ThetaExpansion<F> {
    pub fn coeff(&self, key: &[(usize, usize)]) -> F {
        self.terms.get(key).cloned().unwrap_or_else(F::zero)
    }

    /// Every slot permutation maps the expansion to itself.
    pub fn is_symmetric(&self) -> bool {
        self.terms.iter().all(|(k, v)| {
            (0..self.n).all(|a| {
                (a + 1..self.n).all(|b| {
                    let mut kk = k.clone();
                    kk.swap(a, b);
                    self.coeff(&kk) == *v
                })
            })
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        let terms = self
            .terms
            .iter()
            .map(|(k, v)| TermJson {
                idx: k.iter().map(|&(s, d)| [s, d]).collect(),
                coeff: v.to_string(),
            })
            .collect();
        serde_json::to_value(ThetaJson {
            g: self.g,
            n: self.n,
            terms,
        })
        .expect("plain data")
    }
}

impl<F: Ring> Multidifferential<F> {
    /// Rewrite in the `theta^d = -(2d-1)!! 2^-d eta^{2d}` basis; fails if an
    /// odd `eta` survives.
    pub fn to_theta(&self) -> Result<ThetaExpansion<F>> {
        let mut terms = BTreeMap::new();
        for (k, v) in &self.terms {
            if v.is_zero() {
                continue;
            }
            if k.iter().any(|&(_, j)| j % 2 == 1) {
                return Err(Error::Incompatible(format!(
                    "odd eta term {k:?} in omega_({},{})",
                    self.g, self.n
                )));
            }
            let mut c = v.clone();
            for &(_, j) in k {
                c = c.scale(&theta_factor(j / 2).recip());
            }
            terms.insert(k.iter().map(|&(s, j)| (s, j / 2)).collect(), c);
        }
        Ok(ThetaExpansion {
            g: self.g,
            n: self.n,
            terms,
        })
    }
}

/// Terms with open slots `(slot, point, j)`, each carrying a series in `zeta`.
type LocalTerms<F> = BTreeMap<Vec<(usize, usize, usize)>, Local<F>>;

fn add_into<F: Ring>(acc: &mut LocalTerms<F>, key: Vec<(usize, usize, usize)>, v: Local<F>) {
    match acc.remove(&key) {
        Some(old) => {
            acc.insert(key, old.add(&v));
        }
        None => {
            acc.insert(key, v);
        }
    }
}

fn mul_terms<F: Ring>(a: &LocalTerms<F>, b: &LocalTerms<F>) -> LocalTerms<F> {
    let mut out = LocalTerms::new();
    for (ka, va) in a {
        for (kb, vb) in b {
            let mut k = ka.clone();
            k.extend_from_slice(kb);
            k.sort_unstable();
            add_into(&mut out, k, va.mul(vb));
        }
    }
    out
}

/// Pull back along `zeta -> -zeta`: `f(zeta) d zeta -> -f(-zeta) d zeta`.
fn conjugate<F: Ring>(a: &LocalTerms<F>) -> LocalTerms<F> {
    a.iter().map(|(k, v)| (k.clone(), v.reflect().neg())).collect()
}

/// Memoized recursion on one model.
pub struct EoSolver<'a, F: Ring> {
    fx: FormExpander<'a, F>,
    cache: RwLock<HashMap<(u32, usize), Arc<Multidifferential<F>>>>,
}

impl<'a, F: Ring> EoSolver<'a, F> {
    pub fn new(model: &'a SpectralCurveModel<F>) -> Self {
        EoSolver {
            fx: FormExpander::new(model),
            cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn model(&self) -> &SpectralCurveModel<F> {
        self.fx.model()
    }

    pub fn forms(&self) -> &FormExpander<'a, F> {
        &self.fx
    }

    /// Largest `eta` index that can occur in `omega_{g,n}`.
    fn jmax(g: u32, n: usize) -> usize {
        (2 * (3 * g as i64 - 3 + n as i64)).max(0) as usize
    }

    /// `omega_{0,2}(zeta, p_slot)` near `P_at`, with `eta` indices up to `jmax`.
    fn b_local(&self, at: usize, slot: usize, jmax: usize) -> LocalTerms<F> {
        let prec = self.model().prec;
        (0..=jmax)
            .map(|j| (vec![(slot, at, j)], Local::monomial(F::one(), j as i64, prec)))
            .collect()
    }

    /// First slot of `w` expanded at `P_at`; the others become `slots`.
    fn expand_first(&self, w: &Multidifferential<F>, at: usize, slots: &[usize]) -> Result<LocalTerms<F>> {
        let mut out = LocalTerms::new();
        for (k, c) in &w.terms {
            let (s0, j0) = k[0];
            let loc = self.fx.eta_at(at, s0, j0)?.scale(c);
            let key = k[1..].iter().zip(slots).map(|(&(s, j), &sl)| (sl, s, j)).collect();
            add_into(&mut out, key, loc);
        }
        Ok(out)
    }

    /// First slot at `zeta`, second at `-zeta`, both near `P_at`.
    fn expand_first_two(&self, w: &Multidifferential<F>, at: usize, slots: &[usize]) -> Result<LocalTerms<F>> {
        let mut out = LocalTerms::new();
        for (k, c) in &w.terms {
            let a = self.fx.eta_at(at, k[0].0, k[0].1)?;
            let b = self.fx.eta_at(at, k[1].0, k[1].1)?.reflect().neg();
            let key = k[2..].iter().zip(slots).map(|(&(s, j), &sl)| (sl, s, j)).collect();
            add_into(&mut out, key, a.mul(&b).scale(c));
        }
        Ok(out)
    }

    /// `omega_{0,2}(zeta, -zeta)` near `P_at` as a coefficient of `d zeta^2`.
    fn b_diagonal(&self, at: usize) -> Result<Local<F>> {
        let prec = self.model().prec;
        let deg = (prec - 4).max(1) as usize;
        let reg = bergman_local(self.model(), at, at, deg)?;
        let mut coeffs = vec![F::zero(); deg];
        for (n, slot) in coeffs.iter_mut().enumerate() {
            for k in 0..=n {
                let v = reg.get(k, n - k)?;
                *slot = if (n - k) % 2 == 0 {
                    slot.add_ref(&v)
                } else {
                    slot.sub_ref(&v)
                };
            }
        }
        // -(1/(4 zeta^2) + sum B_kl zeta^k (-zeta)^l)
        let regular = Local::from_coeffs(0, coeffs, deg as i64);
        let pole = Local::monomial(F::from_rational(&Rational::new(1.into(), 4.into())), -2, deg as i64);
        Ok(pole.add(&regular).neg())
    }

    /// Recursion kernel near `P_at`, one series per `eta^j(p_0)` with `j`
    /// even: `2 zeta^(j+1) / ((j+1) * 2 (y(zeta) - y(-zeta)) * 2 zeta)`.
    fn kernel(&self, at: usize, jmax: usize) -> Result<Vec<(usize, Local<F>)>> {
        let y = &self.model().points[at].y;
        let dy = y.sub(&y.reflect());
        let den = dy
            .mul(&Local::monomial(F::from_rational(&int(4)), 1, y.prec() + 1))
            .inv()?;
        Ok((0..=jmax)
            .step_by(2)
            .map(|j| {
                let c = F::from_rational(&(int(2) / int(j as i64 + 1)));
                (j, den.mul(&Local::monomial(c, j as i64 + 1, den.prec() + j as i64 + 2)))
            })
            .collect())
    }

    /// `omega_{g,n}` for `2g - 2 + n > 0`.
    pub fn omega(&self, g: u32, n: usize) -> Result<Arc<Multidifferential<F>>> {
        if 2 * g as i64 - 2 + n as i64 <= 0 || n == 0 {
            return Err(Error::Unstable(g, n));
        }
        if let Some(w) = self.cache.read().unwrap().get(&(g, n)) {
            return Ok(w.clone());
        }
        // lower terms first, in a fixed order
        for gg in 0..=g {
            for nn in 1..=n + 1 {
                if (gg, nn) != (g, n)
                    && 2 * gg as i64 - 2 + nn as i64 > 0
                    && 2 * gg as i64 + nn as i64 <= 2 * g as i64 + n as i64 - 1
                {
                    self.omega(gg, nn)?;
                }
            }
        }
        let w = Arc::new(self.compute(g, n)?);
        let mut cache = self.cache.write().unwrap();
        Ok(cache.entry((g, n)).or_insert(w).clone())
    }

    fn part(&self, g: u32, slots: &[usize], at: usize, jmax: usize) -> Result<Option<LocalTerms<F>>> {
        match (g, slots.len()) {
            (0, 0) => Ok(None),
            (0, 1) => Ok(Some(self.b_local(at, slots[0], jmax))),
            _ => Ok(Some(self.expand_first(&*self.omega(g, slots.len() + 1)?, at, slots)?)),
        }
    }

    fn compute(&self, g: u32, n: usize) -> Result<Multidifferential<F>> {
        let jmax = Self::jmax(g, n);
        let rest: Vec<usize> = (1..n).collect();
        let npts = self.model().n_points();
        let per_point: Vec<BTreeMap<EtaKey, F>> = (0..npts)
            .into_par_iter()
            .map(|at| -> Result<BTreeMap<EtaKey, F>> {
                let mut bracket = LocalTerms::new();
                if g >= 1 {
                    if (g - 1, n + 1) == (0, 2) {
                        bracket.insert(Vec::new(), self.b_diagonal(at)?);
                    } else {
                        let w = self.omega(g - 1, n + 1)?;
                        for (k, v) in self.expand_first_two(&w, at, &rest)? {
                            add_into(&mut bracket, k, v);
                        }
                    }
                }
                for g1 in 0..=g {
                    for mask in 0u64..(1u64 << rest.len()) {
                        let left: Vec<usize> = rest.iter().copied().filter(|&i| mask >> (i - 1) & 1 == 1).collect();
                        let right: Vec<usize> = rest.iter().copied().filter(|&i| mask >> (i - 1) & 1 == 0).collect();
                        if (g1 == 0 && left.is_empty()) || (g1 == g && right.is_empty()) {
                            continue;
                        }
                        let (Some(a), Some(b)) =
                            (self.part(g1, &left, at, jmax)?, self.part(g - g1, &right, at, jmax)?)
                        else {
                            continue;
                        };
                        for (k, v) in mul_terms(&a, &conjugate(&b)) {
                            add_into(&mut bracket, k, v);
                        }
                    }
                }
                let mut out = BTreeMap::new();
                for (j, kern) in self.kernel(at, jmax)? {
                    for (k, v) in &bracket {
                        let c = kern.mul(v).coeff(-1)?;
                        if c.is_zero() {
                            continue;
                        }
                        let mut key = vec![(at, j)];
                        key.extend(k.iter().map(|&(_, s, jj)| (s, jj)));
                        let e = out.entry(key).or_insert_with(F::zero);
                        *e = e.add_ref(&c);
                    }
                }
                Ok(out)
            })
            .collect::<Result<_>>()?;
        let mut terms = BTreeMap::new();
        for m in per_point {
            for (k, v) in m {
                let e: &mut F = terms.entry(k).or_insert_with(F::zero);
                *e = e.add_ref(&v);
            }
        }
        terms.retain(|_, v: &mut F| !v.is_zero());
        Ok(Multidifferential { g, n, terms })
    }
}

/// Local precision sufficient for `omega_{g,n}`.
pub fn eo_local_prec(g: u32, n: usize) -> i64 {
    4 * (3 * g as i64 - 3 + n as i64).max(0) + 8
}

/// Eynard-Orantin `omega_{g,n}` in the `theta` basis, rebuilding the model
/// with more local precision when needed.
pub fn eo_recursion<F: Ring>(
    build: impl Fn(i64) -> Result<SpectralCurveModel<F>>,
    g: u32,
    n: usize,
) -> Result<ThetaExpansion<F>> {
    let start = eo_local_prec(g, n);
    crate::curve::spectral::with_escalation(start, 8 * start, |prec| {
        let model = build(prec)?;
        let solver = EoSolver::new(&model);
        solver.omega(g, n)?.to_theta()
    })
}

/// `(2d+1)!!`, used by callers normalizing against intersection numbers.
pub fn odd_double_factorial(d: i64) -> Rational {
    double_factorial_odd(d + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;
    use crate::recursion::dvv::intersection;

    fn airy(g: u32, n: usize) -> ThetaExpansion<Rational> {
        eo_recursion(|p| Ok(SpectralCurveModel::airy(p)), g, n).unwrap()
    }

    #[test]
    fn airy_low_orders() {
        let w03 = airy(0, 3);
        assert_eq!(w03.terms.len(), 1);
        assert_eq!(w03.coeff(&[(0, 0), (0, 0), (0, 0)]), rat(1, 2));
        let w11 = airy(1, 1);
        assert_eq!(w11.terms.len(), 1);
        assert_eq!(w11.coeff(&[(0, 1)]), rat(1, 24));
    }

    /// Airy coefficients are `2^(g-1) <tau_d>_g`.
    #[test]
    fn airy_matches_intersections() {
        for (g, n) in [(0, 4), (0, 5), (1, 2), (1, 3), (2, 1), (2, 2)] {
            let w = airy(g, n);
            assert!(w.is_symmetric());
            let dim = 3 * g as usize + n - 3;
            let mut ds = vec![0usize; n];
            loop {
                if ds.iter().sum::<usize>() == dim {
                    let key: Vec<_> = ds.iter().map(|&d| (0, d)).collect();
                    let ks: Vec<u32> = ds.iter().map(|&d| d as u32).collect();
                    let expect =
                        intersection(g, &ks) * rat(1, 2) * Rational::from_integer(num_bigint::BigInt::from(2).pow(g));
                    assert_eq!(w.coeff(&key), expect, "({g},{n}) {ds:?}");
                }
                let mut i = 0;
                while i < n && ds[i] == dim {
                    ds[i] = 0;
                    i += 1;
                }
                if i == n {
                    break;
                }
                ds[i] += 1;
            }
            for k in w.terms.keys() {
                assert_eq!(k.iter().map(|x| x.1).sum::<usize>(), dim);
            }
        }
    }
}
