//! Independent engines used to check the closed forms: an adaptive
//! Runge–Kutta integrator for the mode equation and adaptive quadrature.

mod ode;
mod quad;

pub use ode::{
    integrate_classical, integrate_mode, integrate_mode_with, IntegrationResult, OdeOptions,
    OracleSample, StepStats, MIN_STEP, RESCALE_AT, TOL_MAX, TOL_MIN,
};
pub use quad::{quad_adaptive, quad_adaptive_points, PANEL_BUDGET};
