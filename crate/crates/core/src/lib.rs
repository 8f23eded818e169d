//! Quantum oscillator whose stiffness γ(t) passes through zero and turns
//! negative.
//!
//! The classical mode ε(t) is evaluated in closed form ([`mode`]); quadratic
//! moments, energies and fluctuations follow from it ([`moments`]); the energy
//! distribution after a sudden jump to an inverted oscillator is in
//! [`spectra`]. [`oracle`] holds an ODE integrator and an adaptive quadrature
//! used to cross-check the closed forms, and [`validation`] runs the full set
//! of checks.
//!
//! Units: τ = 1 for the power-law profiles and ω₀ = 1 for the jump; ħ = m = 1.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// tabulated constants keep all their published digits
#![allow(clippy::excessive_precision)]

pub mod cli;
pub mod error;
pub mod mode;
pub mod moments;
pub mod oracle;
pub mod scaled;
pub mod specfun;
pub mod spectra;
pub mod validation;

pub use error::{Error, Result};
pub use scaled::ScaledReal;

#[cfg(test)]
pub(crate) fn prop_config(cases: u32) -> proptest::test_runner::Config {
    proptest::test_runner::Config {
        cases,
        rng_seed: proptest::test_runner::RngSeed::Fixed(0x1f2e_3d4c),
        failure_persistence: None,
        ..Default::default()
    }
}
