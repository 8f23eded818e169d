//! Exponent-mantissa reals for quantities that outgrow `f64` in the inverted regime.

use crate::error::{Error, Result};

/// Largest natural exponent accepted when converting back to a plain `f64`.
pub const MAX_EXPORT_EXPONENT: f64 = 700.0;

/// A real number stored as `mantissa * exp(exponent)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledReal {
    pub mantissa: f64,
    pub exponent: f64,
}

impl ScaledReal {
    pub fn new(mantissa: f64, exponent: f64) -> Self {
        Self { mantissa, exponent }
    }

    pub fn plain(value: f64) -> Self {
        Self::new(value, 0.0)
    }

    /// `ln |value|`; `-inf` for zero.
    pub fn ln_abs(&self) -> f64 {
        self.mantissa.abs().ln() + self.exponent
    }

    pub fn signum(&self) -> f64 {
        if self.mantissa == 0.0 {
            0.0
        } else {
            self.mantissa.signum()
        }
    }

    /// Convert to a plain float, failing when the magnitude exceeds `exp(700)`.
    pub fn to_f64(&self) -> Result<f64> {
        if self.mantissa == 0.0 || self.exponent == 0.0 {
            return Ok(self.mantissa);
        }
        let e = self.ln_abs();
        if e > MAX_EXPORT_EXPONENT {
            return Err(Error::Overflow { exponent: e });
        }
        Ok(self.mantissa * self.exponent.exp())
    }

    /// Ratio of two scaled values as another scaled value.
    pub fn div(&self, other: &ScaledReal) -> ScaledReal {
        ScaledReal::new(
            self.mantissa / other.mantissa,
            self.exponent - other.exponent,
        )
    }

    pub fn mul(&self, other: &ScaledReal) -> ScaledReal {
        ScaledReal::new(
            self.mantissa * other.mantissa,
            self.exponent + other.exponent,
        )
    }

    pub fn scale(&self, factor: f64) -> ScaledReal {
        ScaledReal::new(self.mantissa * factor, self.exponent)
    }

    /// Re-express with the mantissa in `[1, e)` (or zero).
    pub fn normalized(&self) -> ScaledReal {
        if self.mantissa == 0.0 || !self.mantissa.is_finite() {
            return *self;
        }
        let shift = self.mantissa.abs().ln();
        ScaledReal::new(self.signum(), self.exponent + shift)
    }
}
