//! Empirical constants used by the verification checks.
//!
//! Every value here is an empirical calibration standing in for an
//! unspecified implied constant of an `O(...)` or `<<` estimate; none of
//! them is a derived mathematical constant. They can be overridden from a
//! JSON file.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Calibration {
    /// `|M - main term| / ((XY)^{3/2} max(log X, 1) log Y)` for the box count.
    pub thm1_deviation: f64,
    /// Same scale, for the singular-integral sum against `M(X, Y)`.
    pub lemma5_deviation: f64,
    /// `|G(t)| <= k min(t, t^2)`.
    pub g_bound: f64,
    /// `|w_q - v_q| <= k |gamma| X^2 / q^2` on `|gamma| <= 1/(2X)`.
    pub wv_proximity: f64,
    /// `|v_q| <= k X Y / q`.
    pub v_trivial_box: f64,
    /// `|v_q| <= k max(log X, 1) / |gamma|`.
    pub v_trivial_decay: f64,
    /// `max |f| / ((XY / Q) log Y)` over sampled minor-arc points.
    pub minor_arc_ratio: f64,
    /// `int |f|^2 <= k X Y max(log X, 1)`.
    pub l2_bound: f64,
    /// `|2 Xi - 2 Xi_main| / (B^{7/8} log^2 B)`.
    pub xi_deviation: f64,
    /// `|N - kappa B log B - C B| / (B^{7/8} log^2 B)` after the fit.
    pub thm2_residual: f64,
    /// Relative tolerance on the fitted leading constant.
    pub thm2_kappa_rel: f64,
    /// Relative tolerance on `(N - N0) / B`.
    pub boundary_rel: f64,
    /// Relative tolerance on `W_3 / Z^2`.
    pub w3_rel: f64,
}

impl Default for Calibration {
    fn default() -> Self {
        Self {
            thm1_deviation: 3.0,
            lemma5_deviation: 3.0,
            g_bound: 40.0,
            wv_proximity: 5.0,
            v_trivial_box: 6.0,
            v_trivial_decay: 10.0,
            minor_arc_ratio: 10.0,
            l2_bound: 40.0,
            xi_deviation: 5.0,
            thm2_residual: 5.0,
            thm2_kappa_rel: 0.25,
            boundary_rel: 0.10,
            w3_rel: 0.05,
        }
    }
}

impl Calibration {
    pub fn from_json_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidArgument(format!("calibration: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidArgument(format!("calibration file {}: {e}", path.display())))?;
        Self::from_json_str(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_override() {
        let c = Calibration::from_json_str(r#"{"thm1_deviation": 2.5}"#).unwrap();
        assert_eq!(c.thm1_deviation, 2.5);
        assert_eq!(c.l2_bound, Calibration::default().l2_bound);
        assert!(Calibration::from_json_str(r#"{"nope": 1}"#).is_err());
    }
}
