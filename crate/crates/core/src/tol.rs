use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Numeric cutoffs shared by every operation in the crate.
///
/// * `rank_tol_rel` — relative singular-value cutoff: `sigma_i` is retained
///   when `sigma_i > rank_tol_rel * sigma_1 * max(rows, cols)`.
/// * `eq_tol` — threshold under which a matrix identity counts as exact.
/// * `angle_one_tol` — how close a cosine must be to 1 before two directions
///   are treated as a common (intersection) direction.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ToleranceConfig {
    pub rank_tol_rel: f64,
    pub eq_tol: f64,
    pub angle_one_tol: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        ToleranceConfig {
            rank_tol_rel: 1e-12,
            eq_tol: 1e-10,
            angle_one_tol: 1e-8,
        }
    }
}

impl ToleranceConfig {
    /// `eq_tol = 0` is allowed as a deliberate falsification mode (strict
    /// equality fails in floating point, which a harness can use to prove
    /// its checks are live); the other cutoffs must be strictly positive.
    pub fn validate(&self) -> Result<()> {
        if !(self.rank_tol_rel > 0.0 && self.angle_one_tol > 0.0 && self.eq_tol >= 0.0) {
            return Err(Error::InvalidTolerance(
                "tolerances must be positive (eq_tol may be zero)".into(),
            ));
        }
        if self.rank_tol_rel >= 1.0 {
            return Err(Error::InvalidTolerance(
                "rank_tol_rel must be below 1".into(),
            ));
        }
        Ok(())
    }

    /// Scale-aware equality threshold for residuals of the form
    /// `|residual| <= eq_tol * (1 + scale)`.
    pub fn eq_scaled(&self, scale: f64) -> f64 {
        self.eq_tol * (1.0 + scale)
    }
}
