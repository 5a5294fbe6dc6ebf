//! Residue coefficients Q_{hkσ}(N), Rademacher coefficients, Farey subsets and the |Q| bounds.

pub mod bounds;
pub mod farey;
pub mod qcoef;
pub mod sums;

pub use bounds::{q_bound, q_bound_refined, xi, Xi};
pub use farey::{farey, FareyFrac, SubsetTag};
pub use qcoef::{
    c01_formula, c_coeff, ek_table, partition_count, phase, phi_direct, q_auto, q_double, q_exact, q_exact_capped,
    q_logseries, q_simple, reconstruct_from_pf, QMethod, QValue, EXACT_CAP,
};
pub use sums::{subset_sum, zero_sum};
