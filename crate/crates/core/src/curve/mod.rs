//! B-model geometry: framing data, the mirror curve and its disk amplitude,
//! and for `p = 1` the rational spectral curve with its ramification data,
//! theta forms and Laplace-transform matrices.

pub mod genus0;
pub mod knot;
pub mod mirror;
pub mod spectral;
pub mod theta;

pub use genus0::ConifoldCurve;
pub use knot::KnotParams;
pub use mirror::{MirrorCurve, Orders, VRoute};
pub use spectral::{RamPoint, SpectralCurveModel};
