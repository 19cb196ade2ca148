//! Graph-sum formula for `omega_{g,n}` with B-model weights: vertex
//! intersection numbers, `B` on edges, `R`-dilaton leaves and `theta`
//! descendant leaves.
//!
//! The `sqrt(-2)` factors of the weight multiply to `(-2)^(g-1)` on every
//! graph, so together with the sign `(-1)^(g-1)` each graph carries `2^(g-1)`.

use std::collections::BTreeMap;

use rayon::prelude::*;

use super::dvv::intersection;
use super::eo::ThetaExpansion;
use super::graphs::{enumerate_stable_graphs, StableGraph};
use crate::algebra::{int, Rational, Ring};
use crate::curve::spectral::SpectralCurveModel;
use crate::curve::theta::{b_check_direct, r_check_matrix, BCheck, FormExpander, RCheck};
use crate::Result;

/// Curve data entering the weights.
pub struct GraphSumData<F: Ring> {
    pub h1: Vec<F>,
    pub r: RCheck<F>,
    pub b: BCheck<F>,
}

impl<F: Ring> GraphSumData<F> {
    /// Data sufficient for `(g, n)`.
    pub fn new(model: &SpectralCurveModel<F>, g: u32, n: usize) -> Result<Self> {
        let dim = (3 * g as i64 - 3 + n as i64).max(0) as usize;
        let fx = FormExpander::new(model);
        Ok(GraphSumData {
            h1: model.points.iter().map(|p| p.h1.clone()).collect(),
            r: r_check_matrix(&fx, dim + 2)?,
            b: b_check_direct(model, dim)?,
        })
    }

    /// Local precision needed by [`GraphSumData::new`].
    pub fn local_prec(g: u32, n: usize) -> i64 {
        4 * (3 * g as i64 - 3 + n as i64).max(0) + 8
    }

    /// Dilaton leaf `-[z^(k-1)] sum_{s'} h1^{s'} R^s_{s'}(z)`.
    fn dilaton(&self, s: usize, k: usize) -> F {
        let mut acc = F::zero();
        for (sp, h) in self.h1.iter().enumerate() {
            acc = acc.add_ref(&h.mul_ref(&self.r.coeff(sp, s, k - 1)));
        }
        acc.neg_ref()
    }
}

/// Height choices at one vertex: heights of its ordinary half-edges plus a
/// multiset of dilaton heights (each `>= 2`), with weight `1 / prod mult!`.
#[derive(Clone, Debug)]
struct VertexChoice {
    heights: Vec<usize>,
    dilatons: Vec<usize>,
    sym: Rational,
}

fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Non-increasing sequences of integers `>= 2` summing to `total`.
fn dilaton_multisets(total: usize, max: usize) -> Vec<Vec<usize>> {
    if total == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in (2..=max.min(total)).rev() {
        for mut rest in dilaton_multisets(total - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn vertex_choices(g: u32, hv: usize) -> Vec<VertexChoice> {
    let mut out = Vec::new();
    // m dilaton leaves raise the dimension by m and use at least 2m
    for m in 0.. {
        let dim = 3 * g as i64 - 3 + hv as i64 + m as i64;
        if dim < 2 * m as i64 {
            break;
        }
        let dim = dim as usize;
        for dil_total in 2 * m..=dim {
            for dil in dilaton_multisets(dil_total, dil_total)
                .into_iter()
                .filter(|d| d.len() == m)
            {
                let mut sym = int(1);
                let mut i = 0;
                while i < dil.len() {
                    let j = dil[i..].iter().take_while(|&&x| x == dil[i]).count();
                    sym /= int((1..=j as i64).product());
                    i += j;
                }
                for heights in compositions(dim - dil_total, hv) {
                    out.push(VertexChoice {
                        heights,
                        dilatons: dil.clone(),
                        sym: sym.clone(),
                    });
                }
            }
        }
    }
    out
}

/// Weighted sum over all decorations of one underlying graph, divided by its
/// automorphism order.
fn graph_contribution<F: Ring>(gr: &StableGraph, g: u32, data: &GraphSumData<F>) -> BTreeMap<Vec<(usize, usize)>, F> {
    let nv = gr.n_vertices();
    let npts = data.h1.len();
    // half-edges per vertex: edge ends first, then leaves
    let mut half: Vec<Vec<(bool, usize)>> = vec![Vec::new(); nv];
    for (e, &(a, b)) in gr.edges.iter().enumerate() {
        half[a].push((true, 2 * e));
        half[b].push((true, 2 * e + 1));
    }
    for (l, &v) in gr.leaves.iter().enumerate() {
        half[v].push((false, l));
    }
    let choices: Vec<Vec<VertexChoice>> = (0..nv).map(|v| vertex_choices(gr.genus[v], half[v].len())).collect();
    let pref = Rational::from_integer(num_bigint::BigInt::from(2).pow(g)) / int(2) / int(gr.aut as i64);
    let mut out: BTreeMap<Vec<(usize, usize)>, F> = BTreeMap::new();
    for code in 0..npts.pow(nv as u32) {
        let sigma: Vec<usize> = (0..nv).map(|i| code / npts.pow(i as u32) % npts).collect();
        let mut idx = vec![0usize; nv];
        loop {
            let mut w = F::from_rational(&pref);
            let mut edge_k = vec![0usize; 2 * gr.edges.len()];
            let mut leaf_k = vec![0usize; gr.leaves.len()];
            for v in 0..nv {
                let ch = &choices[v][idx[v]];
                let mut ks: Vec<u32> = ch.heights.iter().map(|&k| k as u32).collect();
                ks.extend(ch.dilatons.iter().map(|&k| k as u32));
                let val = ks.len() as i64;
                let tau = intersection(gr.genus[v], &ks);
                if tau.is_zero() {
                    w = F::zero();
                    break;
                }
                let e = 2 - 2 * gr.genus[v] as i64 - val;
                let h = &data.h1[sigma[v]];
                let hp = h.pow_i(e).expect("h1 nonzero");
                w = w.mul_ref(&hp).scale(&(tau * &ch.sym));
                for &k in &ch.dilatons {
                    w = w.mul_ref(&data.dilaton(sigma[v], k));
                }
                for (&(is_edge, id), &k) in half[v].iter().zip(&ch.heights) {
                    if is_edge {
                        edge_k[id] = k;
                    } else {
                        leaf_k[id] = k;
                    }
                }
            }
            if !w.is_zero() {
                for (e, &(a, b)) in gr.edges.iter().enumerate() {
                    w = w.mul_ref(&data.b[sigma[a]][sigma[b]][edge_k[2 * e]][edge_k[2 * e + 1]]);
                }
            }
            if !w.is_zero() {
                let key: Vec<(usize, usize)> = gr.leaves.iter().zip(&leaf_k).map(|(&v, &k)| (sigma[v], k)).collect();
                let slot = out.entry(key).or_insert_with(F::zero);
                *slot = slot.add_ref(&w);
            }
            // next decoration
            let mut i = 0;
            while i < nv {
                idx[i] += 1;
                if idx[i] < choices[i].len() {
                    break;
                }
                idx[i] = 0;
                i += 1;
            }
            if i == nv {
                break;
            }
        }
    }
    out
}

/// `omega_{g,n}` from the graph sum, in the `theta` basis.
pub fn graph_sum_b<F: Ring>(data: &GraphSumData<F>, g: u32, n: usize) -> Result<ThetaExpansion<F>> {
    let graphs = enumerate_stable_graphs(g, n)?;
    let parts: Vec<_> = graphs.par_iter().map(|gr| graph_contribution(gr, g, data)).collect();
    let mut terms: BTreeMap<Vec<(usize, usize)>, F> = BTreeMap::new();
    for p in parts {
        for (k, v) in p {
            let slot = terms.entry(k).or_insert_with(F::zero);
            *slot = slot.add_ref(&v);
        }
    }
    terms.retain(|_, v| !v.is_zero());
    Ok(ThetaExpansion { g, n, terms })
}

/// First key where two expansions differ, with both values.
pub fn first_difference<F: Ring>(a: &ThetaExpansion<F>, b: &ThetaExpansion<F>) -> Option<(Vec<(usize, usize)>, F, F)> {
    let keys: std::collections::BTreeSet<_> = a.terms.keys().chain(b.terms.keys()).cloned().collect();
    keys.into_iter().find_map(|k| {
        let (x, y) = (a.coeff(&k), b.coeff(&k));
        (x != y).then_some((k, x, y))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recursion::eo::{eo_local_prec, EoSolver};

    #[test]
    fn vertex_choice_counts() {
        // g = 1 vertex with one half-edge: heights (1) or (0) plus a dilaton of height 2... dim grows
        let ch = vertex_choices(1, 1);
        assert!(ch.iter().any(|c| c.heights == vec![1] && c.dilatons.is_empty()));
        assert!(ch.iter().all(|c| c.dilatons.iter().all(|&k| k >= 2)));
        for c in &ch {
            assert_eq!(
                c.heights.iter().sum::<usize>() + c.dilatons.iter().sum::<usize>(),
                3 - 3 + 1 + c.dilatons.len()
            );
        }
    }

    #[test]
    fn airy_graph_sum_matches_recursion() {
        for (g, n) in [(0, 3), (1, 1), (0, 4), (1, 2), (2, 1)] {
            let prec = eo_local_prec(g, n).max(GraphSumData::<Rational>::local_prec(g, n));
            let m = SpectralCurveModel::airy(prec);
            let data = GraphSumData::new(&m, g, n).unwrap();
            let gs = graph_sum_b(&data, g, n).unwrap();
            let eo = EoSolver::new(&m).omega(g, n).unwrap().to_theta().unwrap();
            assert_eq!(first_difference(&gs, &eo), None, "({g},{n})");
        }
    }
}
