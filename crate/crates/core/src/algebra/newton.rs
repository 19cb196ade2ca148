//! Implicit solving of `F(x, W) = 0` for a power series `W(x)`.

use std::sync::Arc;

use super::series::{Series, SeriesRing};
use super::Ring;
use crate::{Error, Result};

/// `F(W) = sum_j coeffs[j] W^j` evaluated by Horner's rule.
pub fn eval_poly_in<C: Ring>(coeffs: &[Series<C>], w: &Series<C>) -> Result<Series<C>> {
    let ring = w.ring().clone();
    let mut acc = Series::zero(&ring);
    for c in coeffs.iter().rev() {
        acc = acc.mul(w)?.add(c)?;
    }
    Ok(acc)
}

/// Solve `sum_j coeffs[j] W^j = 0` with `W = w0 + (higher order)`.
///
/// The Jacobian `dF/dW` at the base point is inverted once and the chord
/// iteration `W <- W - J0^{-1} F(W)` is run until the residual vanishes in
/// the truncated ring; each pass fixes at least one more degree.
pub fn newton_implicit_solve<C: Ring>(ring: &Arc<SeriesRing>, coeffs: &[Series<C>], w0: &C) -> Result<Series<C>> {
    let coeffs: Vec<Series<C>> = coeffs.iter().map(|c| c.retruncate(ring)).collect::<Result<_>>()?;
    let base: Vec<C> = coeffs.iter().map(|c| c.constant_term()).collect();
    let f0 = base.iter().rev().fold(C::zero(), |acc, c| acc.mul_ref(w0).add_ref(c));
    if !f0.is_zero() {
        return Err(Error::NoSolution);
    }
    let j0 = base.iter().enumerate().skip(1).rev().fold(C::zero(), |acc, (j, c)| {
        acc.mul_ref(w0).add_ref(&c.scale(&super::int(j as i64)))
    });
    let j0_inv = j0.try_inv().ok_or(Error::SingularJacobian)?;

    let max_iter = ring.orders().iter().map(|&o| o as usize).sum::<usize>() + 2;
    let mut w = Series::constant(ring, w0.clone());
    for _ in 0..max_iter {
        let res = eval_poly_in(&coeffs, &w)?;
        if res.is_zero() {
            return Ok(w);
        }
        w = w.sub(&res.scale(&j0_inv))?;
    }
    if eval_poly_in(&coeffs, &w)?.is_zero() {
        Ok(w)
    } else {
        Err(Error::NoConvergence(max_iter))
    }
}
