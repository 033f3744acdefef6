//! Physical constants of one NV centre and the field vectors acting on it.
//!
//! Units used throughout the crate: frequencies in Hz (energies divided by
//! Planck's constant), magnetic fields in Gauss, electric and strain fields in
//! V/cm, times in seconds, angles in radians.
//!
//! In-plane vectors are stored in polar form (axial component, non-axial
//! magnitude, azimuth). The azimuth is measured in the NV frame, with
//! `tan(phi) = y / x` and `z` along the nitrogen-vacancy axis.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Constants of the NV ground-state triplet.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NVParams {
    /// Zero-field splitting, Hz.
    pub d_gs: f64,
    /// Axial Stark coefficient, Hz·cm/V.
    pub d_par: f64,
    /// Non-axial Stark coefficient, Hz·cm/V.
    pub d_perp: f64,
    /// Electron g-factor.
    pub g_e: f64,
    /// Bohr magneton over Planck's constant, Hz/G.
    pub mu_b_over_h: f64,
    /// Axial hyperfine splitting with the 14N nucleus, Hz.
    pub a_hf: f64,
}

impl Default for NVParams {
    fn default() -> Self {
        NVParams {
            d_gs: 2.87e9,
            d_par: 0.35,
            d_perp: 17.0,
            g_e: 2.0028,
            mu_b_over_h: 1.39962e6,
            a_hf: 2.2e6,
        }
    }
}

impl NVParams {
    /// Electron gyromagnetic ratio `g_e * mu_B / h`, Hz/G.
    pub fn gamma_e(&self) -> f64 {
        self.g_e * self.mu_b_over_h
    }

    /// Zeeman frequency `g_e mu_B B / h` for a field in Gauss.
    pub fn zeeman_hz(&self, b_gauss: f64) -> f64 {
        self.gamma_e() * b_gauss
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("d_gs", self.d_gs),
            ("d_par", self.d_par),
            ("d_perp", self.d_perp),
            ("g_e", self.g_e),
            ("mu_b_over_h", self.mu_b_over_h),
            ("a_hf", self.a_hf),
        ];
        for (name, value) in fields {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::invalid(name, format!("must be finite and > 0, got {value}")));
            }
        }
        if self.d_par >= self.d_perp {
            return Err(Error::invalid(
                "d_par",
                format!("must be smaller than d_perp ({} >= {})", self.d_par, self.d_perp),
            ));
        }
        Ok(())
    }
}

/// Wrap an angle into `[0, 2pi)`.
pub fn normalize_angle(phi: f64) -> f64 {
    let r = phi.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Axial/non-axial decomposition shared by the three field types.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PolarVector {
    pub axial: f64,
    pub perp: f64,
    pub phi: f64,
}

impl PolarVector {
    /// Builds a vector with `perp >= 0` and `phi` in `[0, 2pi)`; a negative
    /// magnitude is folded into the azimuth.
    pub fn new(axial: f64, perp: f64, phi: f64) -> Self {
        let (perp, phi) = if perp < 0.0 {
            (-perp, phi + std::f64::consts::PI)
        } else {
            (perp, phi)
        };
        PolarVector {
            axial,
            perp,
            phi: normalize_angle(phi),
        }
    }

    pub fn from_cartesian(x: f64, y: f64, z: f64) -> Self {
        let perp = x.hypot(y);
        let phi = if perp == 0.0 { 0.0 } else { y.atan2(x) };
        PolarVector::new(z, perp, phi)
    }

    /// `(x, y, z)`.
    pub fn cartesian(&self) -> [f64; 3] {
        [
            self.perp * self.phi.cos(),
            self.perp * self.phi.sin(),
            self.axial,
        ]
    }
}

macro_rules! field_type {
    ($(#[$meta:meta])* $name:ident, $axial:ident, $perp:ident, $phi:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
        pub struct $name(PolarVector);

        impl $name {
            pub fn new($axial: f64, $perp: f64, $phi: f64) -> Self {
                $name(PolarVector::new($axial, $perp, $phi))
            }

            pub fn zero() -> Self {
                $name(PolarVector::default())
            }

            pub fn from_cartesian(x: f64, y: f64, z: f64) -> Self {
                $name(PolarVector::from_cartesian(x, y, z))
            }

            pub fn $axial(&self) -> f64 {
                self.0.axial
            }

            pub fn $perp(&self) -> f64 {
                self.0.perp
            }

            pub fn $phi(&self) -> f64 {
                self.0.phi
            }

            pub fn cartesian(&self) -> [f64; 3] {
                self.0.cartesian()
            }

            pub fn polar(&self) -> PolarVector {
                self.0
            }

            /// Same vector with the in-plane azimuth rotated by `angle`.
            pub fn rotated(&self, angle: f64) -> Self {
                Self::new(self.0.axial, self.0.perp, self.0.phi + angle)
            }
        }
    };
}

field_type!(
    /// Magnetic field, Gauss.
    MagneticField, b_z, b_perp, phi_b
);
field_type!(
    /// Applied electric field, V/cm.
    ElectricField, e_z, e_perp, phi_e
);
field_type!(
    /// Crystal strain expressed as an equivalent electric field, V/cm.
    StrainField, sigma_z, sigma_perp, phi_sigma
);

impl StrainField {
    /// Builds strain from its frequency view: `sigma_perp_hz = d_perp * sigma_perp`
    /// and `sigma_z_hz = d_par * sigma_z`.
    pub fn from_frequency(sigma_z_hz: f64, sigma_perp_hz: f64, phi_sigma: f64, p: &NVParams) -> Self {
        StrainField::new(sigma_z_hz / p.d_par, sigma_perp_hz / p.d_perp, phi_sigma)
    }

    /// Non-axial strain splitting `d_perp * sigma_perp`, Hz.
    pub fn perp_frequency(&self, p: &NVParams) -> f64 {
        p.d_perp * self.sigma_perp()
    }

    pub fn axial_frequency(&self, p: &NVParams) -> f64 {
        p.d_par * self.sigma_z()
    }
}

impl ElectricField {
    /// Builds a field from the frequency products `d_par * E_z` and `d_perp * E_perp`.
    pub fn from_frequency(d_par_e_z: f64, d_perp_e_perp: f64, phi_e: f64, p: &NVParams) -> Self {
        ElectricField::new(d_par_e_z / p.d_par, d_perp_e_perp / p.d_perp, phi_e)
    }
}

/// Total effective field `Pi = E + sigma` in Cartesian NV-frame components, V/cm.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct EffectiveField {
    pub pi_x: f64,
    pub pi_y: f64,
    pub pi_z: f64,
}

impl EffectiveField {
    pub fn zero() -> Self {
        EffectiveField::default()
    }

    pub fn pi_perp(&self) -> f64 {
        self.pi_x.hypot(self.pi_y)
    }

    pub fn phi(&self) -> f64 {
        normalize_angle(self.pi_y.atan2(self.pi_x))
    }
}

/// Componentwise sum of the applied field and the strain.
pub fn effective_field(e: &ElectricField, s: &StrainField) -> EffectiveField {
    let [ex, ey, ez] = e.cartesian();
    let [sx, sy, sz] = s.cartesian();
    EffectiveField {
        pi_x: ex + sx,
        pi_y: ey + sy,
        pi_z: ez + sz,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn defaults_are_valid() {
        let p = NVParams::default();
        p.validate().unwrap();
        assert!((p.gamma_e() - 2.8025e6).abs() / 2.8025e6 < 5e-4);
    }

    #[test]
    fn validation_rejects_bad_values() {
        let p = NVParams {
            d_perp: -1.0,
            ..NVParams::default()
        };
        assert!(p.validate().is_err());
        let p = NVParams {
            d_par: 20.0,
            ..NVParams::default()
        };
        assert!(p.validate().is_err());
        let p = NVParams {
            d_gs: f64::NAN,
            ..NVParams::default()
        };
        assert!(p.validate().is_err());
    }

    #[test]
    fn effective_field_examples() {
        let pi = effective_field(&ElectricField::zero(), &StrainField::zero());
        assert_eq!(pi, EffectiveField::zero());

        let pi = effective_field(&ElectricField::new(0.0, 1000.0, 0.0), &StrainField::zero());
        assert_eq!(pi.pi_x, 1000.0);
        assert_eq!(pi.pi_y, 0.0);

        let pi = effective_field(
            &ElectricField::new(0.0, 100.0, 0.0),
            &StrainField::new(0.0, 100.0, PI),
        );
        assert!(pi.pi_x.abs() < 1e-12);
        assert!(pi.pi_y.abs() < 1e-12);
    }

    #[test]
    fn negative_magnitude_folds_into_azimuth() {
        let b = MagneticField::new(1.0, -2.0, 0.25);
        assert_eq!(b.b_perp(), 2.0);
        assert!((b.phi_b() - (0.25 + PI)).abs() < 1e-15);
        let b = MagneticField::new(0.0, 1.0, -0.5);
        assert!((b.phi_b() - (TAU - 0.5)).abs() < 1e-15);
    }

    #[test]
    fn strain_frequency_view() {
        let p = NVParams::default();
        let s = StrainField::from_frequency(0.0, 0.189e6, 0.3, &p);
        assert!((s.sigma_perp() - 0.189e6 / 17.0).abs() < 1e-9);
        assert!((s.perp_frequency(&p) - 0.189e6).abs() < 1e-6);
    }

    proptest::proptest! {
        #[test]
        fn polar_cartesian_round_trip(x in -1e3f64..1e3, y in -1e3f64..1e3, z in -1e3f64..1e3) {
            let b = MagneticField::from_cartesian(x, y, z);
            let [bx, by, bz] = b.cartesian();
            let scale = x.abs().max(y.abs()).max(z.abs()).max(1e-300);
            proptest::prop_assert!((bx - x).abs() <= 1e-12 * scale);
            proptest::prop_assert!((by - y).abs() <= 1e-12 * scale);
            proptest::prop_assert!((bz - z).abs() <= 1e-12 * scale);
            proptest::prop_assert!(b.b_perp() >= 0.0);
            proptest::prop_assert!(b.phi_b() >= 0.0 && b.phi_b() < TAU);
        }
    }
}
