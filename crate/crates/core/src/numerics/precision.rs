use crate::error::{Error, Result};

/// Precision knobs for the extended-precision and quadrature paths.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct PrecisionConfig {
    /// Significant decimal digits carried when exact-rational intermediates
    /// are rounded back to floating point.
    pub working_digits: u32,
    /// Relative tolerance for adaptive quadrature.
    pub quad_rel_tol: f64,
}

impl Default for PrecisionConfig {
    fn default() -> Self {
        Self {
            working_digits: 50,
            quad_rel_tol: 1e-12,
        }
    }
}

impl PrecisionConfig {
    pub fn new(working_digits: u32, quad_rel_tol: f64) -> Result<Self> {
        let cfg = Self {
            working_digits,
            quad_rel_tol,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.working_digits < 15 {
            return Err(Error::Config(format!(
                "working_digits must be >= 15, got {}",
                self.working_digits
            )));
        }
        if !(self.quad_rel_tol > 0.0 && self.quad_rel_tol <= 1e-6) {
            return Err(Error::Config(format!(
                "quad_rel_tol must lie in (0, 1e-6], got {}",
                self.quad_rel_tol
            )));
        }
        Ok(())
    }

    /// Binary precision corresponding to `working_digits` (at least 64 bits).
    pub fn working_bits(&self) -> u32 {
        ((self.working_digits as f64) * std::f64::consts::LOG2_10).ceil() as u32 + 4
    }
}
