//! A-model generating data at the chart carrying the Lagrangian.

pub mod annulus;
pub mod chart;
pub mod disk;
pub mod rlimit;

pub use annulus::{annulus_q0, AnnulusQ0};
pub use chart::{cr_ring_data, CharacterTable, CrStructure, OrbifoldChartData};
pub use disk::{
    disk_factor, disk_potential_a, disk_potential_via_j, j_coefficient, mirror_map, phi_series, xi_pair_sum, xi_series,
};
pub use rlimit::{bernoulli_polynomial, r_matrix_limit, RLimit};
