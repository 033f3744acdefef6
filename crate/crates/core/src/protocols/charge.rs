use crate::error::{Error, Result};

/// Coulomb constant, N m^2 / C^2.
pub const COULOMB_K: f64 = 8.987_551_792e9;
/// Elementary charge, C.
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;

/// Field of a point charge of `charge` elementary charges at `distance`
/// metres, V/cm.
pub fn point_charge_field(charge: f64, distance: f64) -> Result<f64> {
    if !(distance.is_finite() && distance > 0.0) {
        return Err(Error::invalid("distance", format!("must be finite and > 0, got {distance}")));
    }
    if !charge.is_finite() {
        return Err(Error::invalid("charge", "must be finite"));
    }
    // V/m -> V/cm
    Ok(COULOMB_K * charge * ELEMENTARY_CHARGE / (distance * distance) / 100.0)
}
