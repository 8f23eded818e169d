use thiserror::Error;

/// Errors raised by the numerical kernels and the command-line front end.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("pole of the gamma function at {0}")]
    Pole(f64),

    #[error("{what} failed to converge ({detail})")]
    Convergence { what: &'static str, detail: String },

    #[error("terminating hypergeometric sum requested with k = {k}, cap is {cap}")]
    CapExceeded { k: usize, cap: usize },

    #[error("value exp({exponent:.3}) is not representable as f64")]
    Overflow { exponent: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("step size underflow at t = {t} (h = {h:e})")]
    StepUnderflow { t: f64, h: f64 },

    #[error("adaptive quadrature did not converge on [{a}, {b}]: estimate {estimate:e} after {panels} panels")]
    Quadrature {
        a: f64,
        b: f64,
        estimate: f64,
        panels: usize,
    },

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
