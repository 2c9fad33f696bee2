//! Scalar special functions: generalised exponential integrals, truncated
//! exponential moments, Stirling numbers with the weighted `b_m`
//! coefficients, and modified spherical Bessel functions.

mod bessel;
mod expint;
mod moments;
mod stirling;

pub use bessel::{
    bessel_i, bessel_i_checked, bessel_i_large_order, bessel_i_seq, bessel_k, bessel_k_large_order,
    bessel_k_seq, BesselI,
};
pub use expint::{
    digamma_int, exp_int, exp_int_large_order, exp_int_neg_seq, ExpIntTable, EULER_GAMMA,
};
pub use moments::{a_moment, a_moment_large_order, a_moment_seq};
pub use stirling::{b_coeff, stirling2, StirlingTable, WeightedRows, DEFAULT_STIRLING_ORDER};
