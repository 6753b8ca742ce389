//! Special functions behind the kernels and the Green function: real
//! Gamma, its reciprocal, the one-parameter Mittag-Leffler function on the
//! negative axis and the Mainardi (M-Wright) function.

mod gamma;
mod mainardi;
mod mittag_leffler;
mod zeta;

pub use gamma::{beta, gamma_real, gamma_sign, ln_gamma, reciprocal_gamma, sin_pi};
pub use mainardi::{mainardi, mainardi_crossover, MainardiTail};
pub use mittag_leffler::mittag_leffler;
pub use zeta::zeta;
pub(crate) use mittag_leffler::mittag_leffler_ext;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Truncation and branch-selection controls for the series evaluations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesPolicy {
    /// Target relative accuracy.
    pub rel_tol: f64,
    /// Hard cap on the number of series terms.
    pub max_terms: usize,
    /// Where the Mainardi series hands over to the tail representation.
    /// `None` picks the switch per call from the series' own cancellation
    /// estimate, which is the recommended setting.
    pub asymptotic_crossover_z: Option<f64>,
}

impl Default for SeriesPolicy {
    fn default() -> Self {
        Self { rel_tol: 1e-12, max_terms: 400, asymptotic_crossover_z: None }
    }
}

impl SeriesPolicy {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) {
            return Err(domain(format!("rel_tol must be > 0, got {}", self.rel_tol)));
        }
        if self.max_terms < 1 {
            return Err(domain("max_terms must be >= 1"));
        }
        if let Some(z) = self.asymptotic_crossover_z {
            if !(z > 0.0) {
                return Err(domain(format!("asymptotic_crossover_z must be > 0, got {z}")));
            }
        }
        Ok(())
    }
}

/// Rounding of every term is amplified by the cancellation ratio; the
/// factor 8 covers the error of computing each term through exp/ln.
pub(crate) fn series_error_estimate(abs_total: f64, value: f64) -> f64 {
    8.0 * f64::EPSILON * abs_total / value.abs().max(f64::MIN_POSITIVE)
}
