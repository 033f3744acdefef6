use log::warn;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamiltonian::transition_frequencies;
use crate::params::{effective_field, EffectiveField, ElectricField, MagneticField, NVParams, StrainField};

/// Ratio of a perturbing energy to `D_gs` above which a warning is logged.
pub const REGIME_WARN_RATIO: f64 = 0.05;

/// Ratio at which second-order perturbation theory is refused outright.
pub const REGIME_REJECT_RATIO: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Exact,
    Perturbative,
}

/// Change of the two magnetic transition frequencies caused by switching the
/// applied electric field on at fixed magnetic field and strain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransitionShift {
    /// Upper branch, Hz.
    pub d_omega_plus: f64,
    /// Lower branch, Hz.
    pub d_omega_minus: f64,
    pub method: Method,
}

/// Perturbation ratios `(g mu_B |B| / h) / D` and `d_perp Pi_perp / D`.
pub fn regime_ratios(p: &NVParams, b: &MagneticField, pi: &EffectiveField) -> (f64, f64) {
    let [bx, by, bz] = b.cartesian();
    let b_mag = (bx * bx + by * by + bz * bz).sqrt();
    (
        p.zeeman_hz(b_mag) / p.d_gs,
        p.d_perp * pi.pi_perp() / p.d_gs,
    )
}

fn check_regime(p: &NVParams, b: &MagneticField, pi: &EffectiveField) -> Result<()> {
    let (zeeman, stark) = regime_ratios(p, b, pi);
    if !(zeeman.is_finite() && stark.is_finite()) {
        return Err(Error::Regime("non-finite field input".into()));
    }
    for (what, ratio) in [("Zeeman", zeeman), ("non-axial Stark", stark)] {
        if ratio >= REGIME_REJECT_RATIO {
            return Err(Error::Regime(format!(
                "{what} energy / D_gs = {ratio:.3} >= {REGIME_REJECT_RATIO}"
            )));
        }
        if ratio > REGIME_WARN_RATIO {
            warn!("{what} energy / D_gs = {ratio:.3} exceeds {REGIME_WARN_RATIO}; second-order shifts are unreliable");
        }
    }
    Ok(())
}

/// Second-order splitting function `F(B, Pi)`, Hz:
///
/// ```text
/// F^2 = (g mu_B B_z)^2 + (d_perp Pi_perp)^2
///       - (g mu_B)^2 B_perp^2 d_perp (Pi_x cos 2phi_B - Pi_y sin 2phi_B) / D
///       + (g mu_B B_perp)^4 / (4 D^2)
/// ```
///
/// with `tan phi_B = B_y / B_x`, all energies over `h`. The cross term is
/// evaluated with NV-frame components.
pub fn f_function(p: &NVParams, b: &MagneticField, pi: &EffectiveField) -> Result<f64> {
    check_regime(p, b, pi)?;
    let zz = p.zeeman_hz(b.b_z());
    let zp2 = p.zeeman_hz(b.b_perp()).powi(2);
    let two_phi = 2.0 * b.phi_b();
    let stark = p.d_perp * pi.pi_perp();
    let cross = zp2 * p.d_perp * (pi.pi_x * two_phi.cos() - pi.pi_y * two_phi.sin()) / p.d_gs;
    let quartic = zp2 * zp2 / (4.0 * p.d_gs * p.d_gs);
    let radicand = zz * zz + stark * stark - cross + quartic;
    let scale = zz * zz + stark * stark + cross.abs() + quartic;
    if radicand < 0.0 {
        // The radicand is a sum of squares; only rounding can make it negative.
        if radicand < -1e-9 * scale {
            return Err(Error::Regime(format!(
                "negative radicand {radicand:.6e} Hz^2 in F (scale {scale:.6e})"
            )));
        }
        return Ok(0.0);
    }
    Ok(radicand.sqrt())
}

/// Shift of both transitions from the second-order formula:
/// `d_omega_+- = d_par E_z +- [F(B, E + sigma) - F(B, sigma)]`.
pub fn delta_omega_perturbative(
    p: &NVParams,
    b: &MagneticField,
    e: &ElectricField,
    s: &StrainField,
) -> Result<TransitionShift> {
    let on = f_function(p, b, &effective_field(e, s))?;
    let off = f_function(p, b, &effective_field(&ElectricField::zero(), s))?;
    let axial = p.d_par * e.e_z();
    Ok(TransitionShift {
        d_omega_plus: axial + (on - off),
        d_omega_minus: axial - (on - off),
        method: Method::Perturbative,
    })
}

/// Shift of both transitions from full diagonalization (E on minus E off).
pub fn delta_omega_exact(
    p: &NVParams,
    b: &MagneticField,
    e: &ElectricField,
    s: &StrainField,
) -> Result<TransitionShift> {
    let on = transition_frequencies(p, b, &effective_field(e, s))?;
    let off = transition_frequencies(p, b, &effective_field(&ElectricField::zero(), s))?;
    Ok(TransitionShift {
        d_omega_plus: on.plus - off.plus,
        d_omega_minus: on.minus - off.minus,
        method: Method::Exact,
    })
}

pub fn delta_omega(
    method: Method,
    p: &NVParams,
    b: &MagneticField,
    e: &ElectricField,
    s: &StrainField,
) -> Result<TransitionShift> {
    match method {
        Method::Exact => delta_omega_exact(p, b, e, s),
        Method::Perturbative => delta_omega_perturbative(p, b, e, s),
    }
}
