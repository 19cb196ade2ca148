//! Topological recursion on genus-zero spectral curves, psi-class
//! intersection numbers, stable graphs and the graph-sum formula.

pub mod dvv;
pub mod eo;
pub mod graphs;
pub mod graphsum;
pub mod potential;

pub use crate::curve::spectral::SpectralCurveModel;
pub use dvv::dvv_intersections;
pub use eo::{eo_recursion, EoSolver, Multidifferential, ThetaExpansion};
