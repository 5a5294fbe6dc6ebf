//! Multiprecision scalars, exact combinatorics and truncated power series.

pub mod comb;
pub mod complex;
pub mod quad;
pub mod series;

pub use comb::{
    bell_table, bernoulli_number, bernoulli_over_factorial, bernoulli_poly, binomial_general, binomial_rat,
    partial_ordinary_bell, stirling_subset, APRat,
};
pub use complex::{fmt_float, pi, sin_cos, APComplex};
pub use series::{shift_series_basis, taylor_coeffs, taylor_coeffs_multi, TruncSeries};

/// Working precision used when none is given.
pub const DEFAULT_PREC: u32 = 256;
