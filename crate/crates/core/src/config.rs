//! Default tolerances shared by the library checks and the command line.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerances used by the identity checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Closed-form identities evaluated without quadrature.
    pub identity: f64,
    /// Checks whose sides involve numerical integration.
    pub quadrature_coupled: f64,
    /// Relative target handed to the integrator.
    pub quadrature: f64,
    /// Truncation target for convergent series and products.
    pub series: f64,
    /// Length deduplication in spectra.
    pub dedup: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            identity: 1e-8,
            quadrature_coupled: 1e-6,
            quadrature: 1e-10,
            series: 1e-14,
            dedup: 1e-9,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("identity", self.identity),
            ("quadrature_coupled", self.quadrature_coupled),
            ("quadrature", self.quadrature),
            ("series", self.series),
            ("dedup", self.dedup),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Input(format!("tolerance {name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}
