//! The annulus potential at `q = 0` from the `xi` series.

use super::chart::OrbifoldChartData;
use super::disk::xi_pair_sum;
use crate::algebra::series::Series;
use crate::algebra::{int, Rational};
use crate::curve::KnotParams;
use crate::Result;

#[derive(Clone, Debug)]
pub struct AnnulusQ0 {
    /// `(X1 d/dX1 + X2 d/dX2) F_{0,2}(0; X1, X2)`.
    pub euler: Series<Rational>,
    /// `F_{0,2}(0; X1, X2)` without constant term.
    pub potential: Series<Rational>,
}

/// `(1 / (p^2 w1 w2 w3)) sum_gamma xi^gamma_0(X1) xi^gamma_0(X2)` at `v = 1`.
pub fn annulus_q0(params: &KnotParams, x_order: u32) -> Result<AnnulusQ0> {
    let chart = OrbifoldChartData::new(params);
    let w = &chart.weights;
    let pref = int(1) / (int(params.p * params.p) * &w[0] * &w[1] * &w[2]);
    let pair = xi_pair_sum(params, 0, 0, x_order)?;
    let euler = pair.map(|_, c| c.at_one() * &pref);
    let mut potential = Series::zero(euler.ring());
    for (e, c) in euler.terms() {
        potential.add_term(e.clone(), c / int((e[0] + e[1]) as i64));
    }
    Ok(AnnulusQ0 { euler, potential })
}

/// `X1 d/dX1 + X2 d/dX2`.
pub fn x_euler(f: &Series<Rational>) -> Series<Rational> {
    f.map(|e, c| c * int(e.iter().map(|&x| x as i64).sum()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recursion::potential::annulus_b_side_q0;

    #[test]
    fn symmetric_and_vanishing_on_axes() {
        for (p, r, s) in [(1, 1, 1), (2, 3, 1), (3, 1, 2)] {
            let a = annulus_q0(&KnotParams::new(p, r, s).unwrap(), 4).unwrap();
            assert!(!a.euler.is_zero());
            for (e, c) in a.potential.terms() {
                assert!(e[0] > 0 && e[1] > 0);
                assert_eq!(&a.potential.coeff(&[e[1], e[0]]), c);
            }
            assert_eq!(x_euler(&a.potential), a.euler);
        }
    }

    #[test]
    fn matches_curve_at_p1() {
        for (r, s) in [(1, 1), (2, 1)] {
            let params = KnotParams::new(1, r, s).unwrap();
            let a = annulus_q0(&params, 3).unwrap();
            let b = annulus_b_side_q0(&params, 3).unwrap();
            assert_eq!(x_euler(&b), a.euler, "r = {r}, s = {s}");
        }
    }
}
