//! Exact-arithmetic engine for open mirror symmetry of the orbifold resolved
//! conifold with torus-knot Lagrangians: A-model generating series on one
//! side, the mirror curve and Eynard-Orantin recursion on the other.

pub mod algebra;
pub mod amodel;
pub mod checks;
pub mod curve;
pub mod error;
pub mod recursion;

pub use error::{Error, Result};
