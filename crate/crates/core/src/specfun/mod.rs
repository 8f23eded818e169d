//! Scalar special functions: Bessel kernels, log-gamma, terminating 2F1.

mod bessel;
mod dd;
mod gamma;
mod hyp;

pub(crate) use bessel::bessel_k_scaled;
pub use bessel::{bessel_i_scaled, bessel_j, SERIES_LIMIT};
pub use gamma::{gamma, gamma_abs_sq, ln_gamma, ln_gamma_abs_sq, log_gamma_complex};
pub use hyp::{hyp_terminating, HYP_MAX_DEGREE};
