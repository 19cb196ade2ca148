//! Differential forms on a genus-zero spectral curve: the basis forms
//! `eta^j`, `theta^d`, their local expansions at ramification points, the
//! matrix `R(z)` from formal stationary phase, and the edge coefficients `B`.
//!
//! Forms are stored as the coefficient of `dt`. Local expansions at `P_s` are
//! the coefficient of `d zeta_s`.

use std::collections::HashMap;
use std::sync::RwLock;

use super::spectral::SpectralCurveModel;
use crate::algebra::poly::{Poly, RationalFunction};
use crate::algebra::{double_factorial_odd, int, Local, Rational, Ring};
use crate::{Error, Result};

/// `B(t1, t2) = dt1 dt2 / (t1 - t2)^2` in the global coordinate.
pub fn bergman_kernel<F: Ring>(t1: &F, t2: &F) -> Result<F> {
    let d = t1.sub_ref(t2);
    d.mul_ref(&d).try_inv().ok_or(Error::NonUnit)
}

/// `2^-n` as a rational.
fn half_pow(n: i64) -> Rational {
    Rational::new(1.into(), num_bigint::BigInt::from(2).pow(n as u32))
}

/// Bivariate power series in `(z, w)`, known for total degree `< deg`.
#[derive(Clone, Debug, PartialEq)]
pub struct Bivar<F: Ring> {
    deg: usize,
    c: Vec<Vec<F>>,
}

impl<F: Ring> Bivar<F> {
    pub fn zero(deg: usize) -> Self {
        let c = (0..deg).map(|i| vec![F::zero(); deg - i]).collect();
        Bivar { deg, c }
    }

    pub fn constant(v: F, deg: usize) -> Self {
        let mut b = Self::zero(deg);
        if deg > 0 {
            b.c[0][0] = v;
        }
        b
    }

    /// `a(z) b(w)`.
    pub fn outer(a: &Local<F>, b: &Local<F>, deg: usize) -> Result<Self> {
        let mut r = Self::zero(deg);
        let av: Vec<F> = (0..deg as i64).map(|i| a.coeff(i)).collect::<Result<_>>()?;
        let bv: Vec<F> = (0..deg as i64).map(|i| b.coeff(i)).collect::<Result<_>>()?;
        for i in 0..deg {
            for j in 0..deg - i {
                r.c[i][j] = av[i].mul_ref(&bv[j]);
            }
        }
        Ok(r)
    }

    pub fn deg(&self) -> usize {
        self.deg
    }

    pub fn get(&self, i: usize, j: usize) -> Result<F> {
        if i + j >= self.deg {
            return Err(Error::InsufficientOrder(format!(
                "bivariate coefficient ({i},{j}) beyond degree {}",
                self.deg
            )));
        }
        Ok(self.c[i][j].clone())
    }

    pub fn set(&mut self, i: usize, j: usize, v: F) {
        if i + j < self.deg {
            self.c[i][j] = v;
        }
    }

    fn zip(&self, o: &Self, f: impl Fn(&F, &F) -> F) -> Self {
        let deg = self.deg.min(o.deg);
        let mut r = Self::zero(deg);
        for i in 0..deg {
            for j in 0..deg - i {
                r.c[i][j] = f(&self.c[i][j], &o.c[i][j]);
            }
        }
        r
    }

    pub fn add(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a.add_ref(b))
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a.sub_ref(b))
    }

    pub fn mul(&self, o: &Self) -> Self {
        let deg = self.deg.min(o.deg);
        let mut r = Self::zero(deg);
        for i in 0..deg {
            for j in 0..deg - i {
                if self.c[i][j].is_zero() {
                    continue;
                }
                for a in 0..deg - i - j {
                    for b in 0..deg - i - j - a {
                        if !o.c[a][b].is_zero() {
                            let v = self.c[i][j].mul_ref(&o.c[a][b]);
                            r.c[i + a][j + b] = r.c[i + a][j + b].add_ref(&v);
                        }
                    }
                }
            }
        }
        r
    }

    pub fn inv(&self) -> Result<Self> {
        let deg = self.deg;
        if deg == 0 {
            return Ok(self.clone());
        }
        let c0 = self.c[0][0].try_inv().ok_or(Error::NonUnit)?;
        let mut h = Self::zero(deg);
        h.c[0][0] = c0.clone();
        for n in 1..deg {
            for i in 0..=n {
                let j = n - i;
                let mut acc = F::zero();
                for a in 0..=i {
                    for b in 0..=j {
                        if a + b == 0 || self.c[a][b].is_zero() {
                            continue;
                        }
                        acc = acc.add_ref(&self.c[a][b].mul_ref(&h.c[i - a][j - b]));
                    }
                }
                h.c[i][j] = acc.mul_ref(&c0).neg_ref();
            }
        }
        Ok(h)
    }

    /// Exact division by `z - eps w` (`eps = +-1`), one homogeneous
    /// component at a time. Fails when the division is not exact.
    pub fn div_linear(&self, eps: i64) -> Result<Self> {
        if self.deg == 0 {
            return Ok(self.clone());
        }
        let deg = self.deg - 1;
        let mut r = Self::zero(deg);
        let e = int(eps);
        for n in 0..self.deg {
            // component sum_i a_i z^i w^(n-i); set w = 1 and divide by (z - eps)
            let a: Vec<&F> = (0..=n).map(|i| &self.c[i][n - i]).collect();
            if n == 0 {
                if !a[0].is_zero() {
                    return Err(Error::Incompatible("constant term not divisible".into()));
                }
                continue;
            }
            let mut b = vec![F::zero(); n];
            b[n - 1] = a[n].clone();
            for i in (1..n).rev() {
                b[i - 1] = a[i].add_ref(&b[i].scale(&e));
            }
            if !a[0].add_ref(&b[0].scale(&e)).is_zero() {
                return Err(Error::Incompatible(format!("degree-{n} component not divisible")));
            }
            for (i, bi) in b.into_iter().enumerate() {
                r.c[i][n - 1 - i] = bi;
            }
        }
        Ok(r)
    }
}

/// Local expansions of basis forms, cached per pair of points.
pub struct FormExpander<'a, F: Ring> {
    model: &'a SpectralCurveModel<F>,
    poles: RwLock<HashMap<(usize, usize, u32), Local<F>>>,
    etas: RwLock<HashMap<(usize, usize), Vec<(u32, F)>>>,
}

impl<'a, F: Ring> FormExpander<'a, F> {
    pub fn new(model: &'a SpectralCurveModel<F>) -> Self {
        FormExpander {
            model,
            poles: RwLock::new(HashMap::new()),
            etas: RwLock::new(HashMap::new()),
        }
    }

    pub fn model(&self) -> &SpectralCurveModel<F> {
        self.model
    }

    /// `dt / (t - t_from)^n` expanded at `P_at` in `zeta_at`.
    pub fn pole_at(&self, at: usize, from: usize, n: u32) -> Result<Local<F>> {
        if let Some(v) = self.poles.read().unwrap().get(&(at, from, n)) {
            return Ok(v.clone());
        }
        let p = &self.model.points[at];
        let base = p.t.sub_ref(&self.model.points[from].t);
        let shifted = p.tau.add(&Local::constant(base, p.tau.prec()));
        let v = shifted.inv()?.pow_u(n).mul(&p.tau.derivative());
        self.poles.write().unwrap().insert((at, from, n), v.clone());
        Ok(v)
    }

    /// `eta^j_s = sum_n c_n dt / (t - t_s)^n` as the list of `(n, c_n)`.
    pub fn eta_poles(&self, s: usize, j: usize) -> Result<Vec<(u32, F)>> {
        if let Some(v) = self.etas.read().unwrap().get(&(s, j)) {
            return Ok(v.clone());
        }
        let tau = &self.model.points[s].tau;
        let dtau = tau.derivative();
        let mut out = Vec::with_capacity(j + 1);
        let mut pw = Local::constant(F::one(), tau.prec());
        for m in 0..=j {
            let c = pw.mul(&dtau).coeff(j as i64)?.scale(&int(m as i64 + 1));
            if !c.is_zero() {
                out.push((m as u32 + 2, c));
            }
            pw = pw.mul(tau);
        }
        self.etas.write().unwrap().insert((s, j), out.clone());
        Ok(out)
    }

    /// `eta^j_s` expanded at `P_at`.
    pub fn eta_at(&self, at: usize, s: usize, j: usize) -> Result<Local<F>> {
        let mut acc: Option<Local<F>> = None;
        for (n, c) in self.eta_poles(s, j)? {
            let term = self.pole_at(at, s, n)?.scale(&c);
            acc = Some(match acc {
                None => term,
                Some(a) => a.add(&term),
            });
        }
        Ok(acc.unwrap_or_else(|| Local::zero(self.model.prec)))
    }

    /// `theta^d_s` expanded at `P_at`.
    pub fn theta_at(&self, at: usize, s: usize, d: usize) -> Result<Local<F>> {
        Ok(self.eta_at(at, s, 2 * d)?.scale_q(&theta_factor(d)))
    }

    /// `eta^j_s` as a rational function of `t`.
    pub fn eta_global(&self, s: usize, j: usize) -> Result<RationalFunction<F>> {
        let t = &self.model.points[s].t;
        let mut acc = RationalFunction::constant(F::zero());
        for (n, c) in self.eta_poles(s, j)? {
            acc = acc.add(&RationalFunction::pole(c, t, n));
        }
        Ok(acc)
    }

    pub fn theta_global(&self, s: usize, d: usize) -> Result<RationalFunction<F>> {
        Ok(self.eta_global(s, 2 * d)?.scale(&F::from_rational(&theta_factor(d))))
    }
}

/// `theta^d = -(2d-1)!! 2^-d eta^(2d)`.
pub fn theta_factor(d: usize) -> Rational {
    -double_factorial_odd(d as i64) * half_pow(d as i64)
}

/// `R^s_{s'}(z)` stored as `entries[s'][s][j] = [z^j]`, `j < order`.
#[derive(Clone, Debug, PartialEq)]
pub struct RCheck<F: Ring> {
    pub order: usize,
    pub entries: Vec<Vec<Vec<F>>>,
}

impl<F: Ring> RCheck<F> {
    pub fn n(&self) -> usize {
        self.entries.len()
    }

    /// `[z^j] R^{upper}_{lower}`, zero beyond the stored order.
    pub fn coeff(&self, lower: usize, upper: usize, j: usize) -> F {
        self.entries[lower][upper].get(j).cloned().unwrap_or_else(F::zero)
    }

    /// First `(a, b, j)` where `R^T(-z) R(z) - Id` has a nonzero `z^j` entry.
    pub fn unitarity_defect(&self) -> Option<(usize, usize, usize, F)> {
        let n = self.n();
        for j in 0..self.order {
            for a in 0..n {
                for b in 0..n {
                    let mut acc = if j == 0 && a == b {
                        F::one().neg_ref()
                    } else {
                        F::zero()
                    };
                    for c in 0..n {
                        for i in 0..=j {
                            let sign = if i % 2 == 0 { 1 } else { -1 };
                            let v = self.coeff(c, a, i).mul_ref(&self.coeff(c, b, j - i)).scale(&int(sign));
                            acc = acc.add_ref(&v);
                        }
                    }
                    if !acc.is_zero() {
                        return Some((a, b, j, acc));
                    }
                }
            }
        }
        None
    }

    /// Entry series with `z -> -z`.
    pub fn reflected(&self) -> Self {
        let entries = self
            .entries
            .iter()
            .map(|row| {
                row.iter()
                    .map(|s| {
                        s.iter()
                            .enumerate()
                            .map(|(j, c)| if j % 2 == 1 { c.neg_ref() } else { c.clone() })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        RCheck {
            order: self.order,
            entries,
        }
    }
}

/// Local precision needed for `R` through `z^(order-1)`.
pub fn r_check_local_prec(order: usize) -> i64 {
    2 * order as i64 + 2
}

/// Formal stationary phase: with `theta^0_{s'} = sum_j e_j zeta_s^j d zeta_s`
/// near `P_s`, `R^s_{s'}(z) = sum_{m >= -1} e_{2m} (2m-1)!! (z/2)^(m+1)`.
pub fn r_check_matrix<F: Ring>(fx: &FormExpander<'_, F>, order: usize) -> Result<RCheck<F>> {
    let n = fx.model().n_points();
    let mut entries = vec![vec![Vec::new(); n]; n];
    for (lower, row) in entries.iter_mut().enumerate() {
        for (upper, slot) in row.iter_mut().enumerate() {
            let th = fx.theta_at(upper, lower, 0)?;
            *slot = (0..order)
                .map(|j| {
                    let m = j as i64 - 1;
                    Ok(th.coeff(2 * m)?.scale(&(double_factorial_odd(m) * half_pow(j as i64))))
                })
                .collect::<Result<_>>()?;
        }
    }
    Ok(RCheck { order, entries })
}

/// `B_{k,l}` table indexed `[s][s'][k][l]` for `k, l <= kmax`.
pub type BCheck<F> = Vec<Vec<Vec<Vec<F>>>>;

/// Regular part of `B` at `(P_s, P_s')` as a series in `(zeta_s, zeta_s')`,
/// known below total degree `deg`.
pub fn bergman_local<F: Ring>(model: &SpectralCurveModel<F>, s: usize, sp: usize, deg: usize) -> Result<Bivar<F>> {
    let (a, b) = (&model.points[s], &model.points[sp]);
    let da = a.tau.derivative();
    let db = b.tau.derivative();
    if s != sp {
        let base = a.t.sub_ref(&b.t);
        let one = Local::constant(F::one(), deg as i64 + 1);
        let den = Bivar::outer(&a.tau, &one, deg)?
            .sub(&Bivar::outer(&one, &b.tau, deg)?)
            .add(&Bivar::constant(base, deg));
        let inv = den.inv()?;
        return Ok(Bivar::outer(&da, &db, deg)?.mul(&inv.mul(&inv)));
    }
    // (tau(z) - tau(w)) / (z - w) as a sum of complete homogeneous polynomials
    let big = deg + 2;
    let mut dd = Bivar::<F>::zero(big);
    for n in 1..=big {
        let c = a.tau.coeff(n as i64)?;
        if c.is_zero() {
            continue;
        }
        for i in 0..n {
            let j = n - 1 - i;
            let old = dd.get(i, j)?;
            dd.set(i, j, old.add_ref(&c));
        }
    }
    let num = Bivar::outer(&da, &da, big)?.sub(&dd.mul(&dd));
    let reg = num.div_linear(1)?.div_linear(1)?;
    let inv = dd.inv()?;
    let out = reg.mul(&inv.mul(&inv));
    let mut r = Bivar::zero(deg);
    for i in 0..deg {
        for j in 0..deg - i {
            r.set(i, j, out.get(i, j)?);
        }
    }
    Ok(r)
}

/// `B_{k,l} = (2k-1)!!(2l-1)!!/2^(k+l+1) B_{2k,2l}` from the kernel expansion.
pub fn b_check_direct<F: Ring>(model: &SpectralCurveModel<F>, kmax: usize) -> Result<BCheck<F>> {
    let n = model.n_points();
    let deg = 4 * kmax + 1;
    let mut out = vec![vec![Vec::new(); n]; n];
    for (s, row) in out.iter_mut().enumerate() {
        for (sp, slot) in row.iter_mut().enumerate() {
            let b = bergman_local(model, s, sp, deg)?;
            *slot = (0..=kmax)
                .map(|k| {
                    (0..=kmax)
                        .map(|l| {
                            let f = double_factorial_odd(k as i64)
                                * double_factorial_odd(l as i64)
                                * half_pow((k + l + 1) as i64);
                            Ok(b.get(2 * k, 2 * l)?.scale(&f))
                        })
                        .collect::<Result<Vec<F>>>()
                })
                .collect::<Result<_>>()?;
        }
    }
    Ok(out)
}

/// `B_{k,l} = [z^k w^l] (delta - sum R^s_{s''}(z) R^{s'}_{s''}(w)) / (z + w)`.
pub fn b_check_from_r<F: Ring>(r: &RCheck<F>, kmax: usize) -> Result<BCheck<F>> {
    let n = r.n();
    let deg = 2 * kmax + 2;
    if r.order < deg {
        return Err(Error::InsufficientOrder(format!(
            "R known to z^{}, need z^{}",
            r.order,
            deg - 1
        )));
    }
    let mut out = vec![vec![Vec::new(); n]; n];
    for (s, row) in out.iter_mut().enumerate() {
        for (sp, slot) in row.iter_mut().enumerate() {
            let mut num = Bivar::constant(if s == sp { F::one() } else { F::zero() }, deg);
            for spp in 0..n {
                let a = Local::from_coeffs(0, r.entries[spp][s].clone(), r.order as i64);
                let b = Local::from_coeffs(0, r.entries[spp][sp].clone(), r.order as i64);
                num = num.sub(&Bivar::outer(&a, &b, deg)?);
            }
            let q = num.div_linear(-1)?;
            *slot = (0..=kmax)
                .map(|k| (0..=kmax).map(|l| q.get(k, l)).collect::<Result<Vec<F>>>())
                .collect::<Result<_>>()?;
        }
    }
    Ok(out)
}

/// First `(s, s', k, l)` where the two tables differ.
pub fn b_check_mismatch<F: Ring>(a: &BCheck<F>, b: &BCheck<F>) -> Option<(usize, usize, usize, usize)> {
    for (s, row) in a.iter().enumerate() {
        for (sp, t) in row.iter().enumerate() {
            for (k, r) in t.iter().enumerate() {
                for (l, v) in r.iter().enumerate() {
                    if *v != b[s][sp][k][l] {
                        return Some((s, sp, k, l));
                    }
                }
            }
        }
    }
    None
}

/// `num(t) / D(t)^n` with `D = prod_s (t - t_s)`; keeps every form with
/// poles only at ramification points free of gcd reductions.
#[derive(Clone, Debug)]
pub struct PoleForm<F: Ring> {
    pub num: Poly<F>,
    pub n: u32,
}

struct PoleBasis<F: Ring> {
    d: Poly<F>,
    dd: Poly<F>,
    /// `dt / dx = g / d`
    g: Poly<F>,
}

impl<F: Ring> PoleBasis<F> {
    fn new(fx: &FormExpander<'_, F>) -> Result<Self> {
        let d = fx
            .model()
            .points
            .iter()
            .fold(Poly::constant(F::one()), |acc, p| acc.mul(&Poly::linear_root(&p.t)));
        let dx = fx.model().dx_rational()?;
        let g = dx.den().scale(&dx.num().lead().try_inv().ok_or(Error::NonUnit)?);
        if dx.num().monic() != d {
            return Err(Error::Unsupported(
                "dx must vanish exactly at the ramification points".into(),
            ));
        }
        Ok(PoleBasis {
            dd: d.derivative(),
            d,
            g,
        })
    }

    fn lift(&self, f: &PoleForm<F>, n: u32) -> Poly<F> {
        f.num.mul(&self.d.pow(n - f.n))
    }

    fn add(&self, a: &PoleForm<F>, b: &PoleForm<F>) -> PoleForm<F> {
        let n = a.n.max(b.n);
        PoleForm {
            num: self.lift(a, n).add(&self.lift(b, n)),
            n,
        }
    }

    fn eq(&self, a: &PoleForm<F>, b: &PoleForm<F>) -> bool {
        let n = a.n.max(b.n);
        self.lift(a, n) == self.lift(b, n)
    }

    fn derivative(&self, f: &PoleForm<F>) -> PoleForm<F> {
        let num = f
            .num
            .derivative()
            .mul(&self.d)
            .sub(&f.num.mul(&self.dd).scale(&F::from_rational(&int(f.n as i64))));
        PoleForm { num, n: f.n + 1 }
    }

    fn over_dx(&self, f: &PoleForm<F>) -> PoleForm<F> {
        PoleForm {
            num: f.num.mul(&self.g),
            n: f.n + 1,
        }
    }

    fn from_poles(&self, fx: &FormExpander<'_, F>, s: usize, poles: &[(u32, F)]) -> Result<PoleForm<F>> {
        let (cof, rem) = self.d.divrem(&Poly::linear_root(&fx.model().points[s].t));
        debug_assert!(rem.is_zero());
        let n = poles.iter().map(|p| p.0).max().unwrap_or(0);
        let mut num = Poly::zero();
        for (m, c) in poles {
            let part = cof
                .pow(n)
                .mul(&Poly::linear_root(&fx.model().points[s].t).pow(n - m))
                .scale(c);
            num = num.add(&part);
        }
        Ok(PoleForm { num, n })
    }
}

/// `theta-hat^k_s` for `k <= kmax`, with
/// `xi^k = (-1)^k (d/dx)^(k-1) (theta^0 / dx)` and `d/dx = (1/x') d/dt`.
fn theta_hat_forms<F: Ring>(
    fx: &FormExpander<'_, F>,
    pb: &PoleBasis<F>,
    s: usize,
    kmax: usize,
) -> Result<Vec<PoleForm<F>>> {
    let th0 = pb.from_poles(fx, s, &theta_poles(fx, s, 0)?)?;
    let mut out = vec![th0.clone()];
    let mut xi = pb.over_dx(&th0);
    xi.num = xi.num.neg();
    for k in 1..=kmax {
        if k > 1 {
            xi = pb.over_dx(&pb.derivative(&xi));
            xi.num = xi.num.neg();
        }
        out.push(pb.derivative(&xi));
    }
    Ok(out)
}

fn theta_poles<F: Ring>(fx: &FormExpander<'_, F>, s: usize, d: usize) -> Result<Vec<(u32, F)>> {
    let f = F::from_rational(&theta_factor(d));
    Ok(fx
        .eta_poles(s, 2 * d)?
        .into_iter()
        .map(|(n, c)| (n, c.mul_ref(&f)))
        .collect())
}

/// `theta-hat^k_s` as rational functions of `t`.
pub fn theta_hat_global<F: Ring>(fx: &FormExpander<'_, F>, s: usize, kmax: usize) -> Result<Vec<RationalFunction<F>>> {
    let pb = PoleBasis::new(fx)?;
    theta_hat_forms(fx, &pb, s, kmax)?
        .into_iter()
        .map(|f| RationalFunction::new(f.num, pb.d.pow(f.n)))
        .collect()
}

/// Check `theta^k_s = sum_{s'} sum_j [z^j] R^s_{s'} theta-hat^{k-j}_{s'}` for
/// `k <= kmax`; with `transpose` the indices of `R` are swapped. Returns the
/// first failing `(s, k)`.
pub fn theta_hat_identity<F: Ring>(
    fx: &FormExpander<'_, F>,
    r: &RCheck<F>,
    kmax: usize,
    transpose: bool,
) -> Result<Option<(usize, usize)>> {
    let n = fx.model().n_points();
    if r.order <= kmax {
        return Err(Error::InsufficientOrder(format!(
            "R known to z^{}, need z^{kmax}",
            r.order
        )));
    }
    let pb = PoleBasis::new(fx)?;
    let hats: Vec<Vec<PoleForm<F>>> = (0..n)
        .map(|s| theta_hat_forms(fx, &pb, s, kmax))
        .collect::<Result<_>>()?;
    for s in 0..n {
        for k in 0..=kmax {
            let lhs = pb.from_poles(fx, s, &theta_poles(fx, s, k)?)?;
            let mut rhs = PoleForm {
                num: Poly::zero(),
                n: 0,
            };
            for (sp, hat) in hats.iter().enumerate() {
                for j in 0..=k {
                    let c = if transpose {
                        r.coeff(s, sp, j)
                    } else {
                        r.coeff(sp, s, j)
                    };
                    if !c.is_zero() {
                        let h = &hat[k - j];
                        rhs = pb.add(
                            &rhs,
                            &PoleForm {
                                num: h.num.scale(&c),
                                n: h.n,
                            },
                        );
                    }
                }
            }
            if !pb.eq(&lhs, &rhs) {
                return Ok(Some((s, k)));
            }
        }
    }
    Ok(None)
}
