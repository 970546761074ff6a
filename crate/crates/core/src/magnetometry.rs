//! Experimental side: susceptibility datasets, Bleaney-Bowers fits, the
//! bridging-angle correlation and engine curves driven by fitted couplings.

mod dataset;
mod engine;
mod fit;

pub use dataset::{ingest_csv, SusceptibilityDataset, SusceptibilityPoint};
pub use engine::{
    engine_curve, hot_axis, write_engine_curve_csv, EnginePoint, ENGINE_CURVE_COLUMNS,
};
pub use fit::{
    bleaney_bowers, fit_bleaney_bowers, fit_bleaney_bowers_with, residual_jacobian, residuals,
    synthesize, FitOptions, FitReport, FitResult, GPolicy,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::substance::Coupling;

/// Default sanity window for Cu-O-Cu bridging angles, in degrees.
pub const ANGLE_WINDOW_DEG: (f64, f64) = (80.0, 120.0);

/// Metal-oxygen-metal bridging angle in degrees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BridgingAngle(f64);

impl BridgingAngle {
    pub fn new(theta_deg: f64) -> Result<Self> {
        Self::with_window(theta_deg, ANGLE_WINDOW_DEG)
    }

    /// Open window `(min, max)`.
    pub fn with_window(theta_deg: f64, (min, max): (f64, f64)) -> Result<Self> {
        if !(theta_deg.is_finite() && theta_deg > min && theta_deg < max) {
            return Err(Error::AngleOutOfRange {
                theta: theta_deg,
                min,
                max,
            });
        }
        Ok(BridgingAngle(theta_deg))
    }

    pub fn degrees(self) -> f64 {
        self.0
    }
}

/// Empirical hydroxo-bridged Cu(II) correlation `J/k_B = 106 theta - 10387` (K).
pub fn coupling_from_angle(angle: BridgingAngle) -> Result<Coupling> {
    Coupling::new(106.0 * angle.0 - 10387.0)
}

/// Angle where the linear correlation crosses zero, `10387 / 106` degrees.
pub fn zero_coupling_angle() -> f64 {
    10387.0 / 106.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angle_map_values() {
        let j = |t: f64| {
            coupling_from_angle(BridgingAngle::new(t).unwrap())
                .unwrap()
                .kelvin()
        };
        assert!((j(98.0) - 1.0).abs() < 1e-9);
        assert!((j(97.5) + 52.0).abs() < 1e-9);
        assert!(j(zero_coupling_angle()).abs() < 1e-9);
        assert!((zero_coupling_angle() - 97.990_566).abs() < 1e-6);
    }

    #[test]
    fn angle_window() {
        assert!(BridgingAngle::new(80.0).is_err());
        assert!(BridgingAngle::new(121.0).is_err());
        assert!(BridgingAngle::new(f64::NAN).is_err());
        assert!(BridgingAngle::with_window(60.0, (50.0, 70.0)).is_ok());
    }
}
