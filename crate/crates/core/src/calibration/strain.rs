use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::params::{effective_field, ElectricField, MagneticField, NVParams, StrainField};

use super::hyperfine::{central_splitting, hyperfine_hamiltonian, hyperfine_lines};

/// Central-line splitting at `B_z = 0` for strain `sigma_perp_freq` (Hz) and
/// in-plane field `b_perp` (G). `geometry = 2 phi_B + phi_sigma`.
pub fn central_line_splitting(p: &NVParams, sigma_perp_freq: f64, b_perp: f64, geometry: f64) -> Result<f64> {
    let s = StrainField::from_frequency(0.0, sigma_perp_freq, geometry, p);
    let pi = effective_field(&ElectricField::zero(), &s);
    let sys = hyperfine_hamiltonian(p, &MagneticField::new(0.0, b_perp, 0.0), &pi, false)?;
    Ok(central_splitting(&hyperfine_lines(&sys)?))
}

/// Non-axial strain (frequency view, Hz) reproducing a measured central-line
/// splitting at `B_z = 0`.
///
/// The relative azimuth of strain and in-plane field is not observable from
/// one splitting; quadrature (`2 phi_B + phi_sigma = pi/2`) is assumed, where
/// the field and strain contributions add without interference and the
/// splitting grows monotonically with strain.
pub fn infer_sigma_perp(central: f64, b_perp: f64, p: &NVParams) -> Result<f64> {
    infer_sigma_perp_at(central, b_perp, FRAC_PI_2, p)
}

/// As [`infer_sigma_perp`] with an explicit geometry `2 phi_B + phi_sigma`.
/// The root is searched on the branch above the splitting minimum.
pub fn infer_sigma_perp_at(central: f64, b_perp: f64, geometry: f64, p: &NVParams) -> Result<f64> {
    if !(central.is_finite() && central >= 0.0) {
        return Err(Error::invalid("central_splitting", "must be finite and >= 0"));
    }
    let f = |s: f64| central_line_splitting(p, s, b_perp, geometry);
    let floor = f(0.0)?;
    let tol = 1e-9 * floor.max(1.0);
    if (central - floor).abs() <= tol {
        return Ok(0.0);
    }
    if central < floor {
        return Err(Error::Regime(format!(
            "central splitting {central:.6e} Hz is below the field-induced floor {floor:.6e} Hz"
        )));
    }
    let mut hi = central.max(1.0);
    while f(hi)? < central {
        hi *= 2.0;
        if hi > 0.5 * p.d_gs {
            return Err(Error::NoBracket("no strain reproduces the splitting".into()));
        }
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid)? < central {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-12 * hi {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}
