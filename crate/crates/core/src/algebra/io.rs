//! TSV and JSON serialization of rational series.

use serde::{Deserialize, Serialize};

use super::series::{Series, SeriesRing};
use super::Rational;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub exp: Vec<u32>,
    pub num: String,
    pub den: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub vars: Vec<String>,
    pub orders: Vec<u32>,
    pub terms: Vec<TermJson>,
}

pub fn to_json(s: &Series<Rational>) -> SeriesJson {
    SeriesJson {
        vars: s.ring().vars().to_vec(),
        orders: s.ring().orders().to_vec(),
        terms: s
            .terms()
            .iter()
            .map(|(e, c)| TermJson {
                exp: e.clone(),
                num: c.numer().to_string(),
                den: c.denom().to_string(),
            })
            .collect(),
    }
}

pub fn from_json(j: &SeriesJson) -> Result<Series<Rational>> {
    let vars: Vec<&str> = j.vars.iter().map(|s| s.as_str()).collect();
    let ring = SeriesRing::new(&vars, &j.orders).build();
    let mut terms = Vec::with_capacity(j.terms.len());
    for t in &j.terms {
        if t.exp.len() != vars.len() {
            return Err(Error::Parse("exponent length mismatch".into()));
        }
        let c = super::parse_rational(&format!("{}/{}", t.num, t.den))?;
        terms.push((t.exp.clone(), c));
    }
    Ok(Series::from_terms(&ring, terms))
}

/// One row per monomial: exponents, numerator, denominator, tab-separated,
/// preceded by a header row.
pub fn to_tsv(s: &Series<Rational>) -> String {
    let mut out = String::new();
    let header: Vec<String> = s
        .ring()
        .vars()
        .iter()
        .map(|v| format!("exp_{v}"))
        .chain(["num".to_string(), "den".to_string()])
        .collect();
    out.push_str(&header.join("\t"));
    out.push('\n');
    for (e, c) in s.terms() {
        let row: Vec<String> = e
            .iter()
            .map(|x| x.to_string())
            .chain([c.numer().to_string(), c.denom().to_string()])
            .collect();
        out.push_str(&row.join("\t"));
        out.push('\n');
    }
    out
}
