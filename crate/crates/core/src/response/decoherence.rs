use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::NVParams;

/// Phenomenological coherence times.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DecoherenceParams {
    /// `T2*` at zero axial field, s.
    pub t2_star_perp: f64,
    /// `T2*` at `b_z_max`, s.
    pub t2_star_par: f64,
    /// Hahn-echo coherence time, s.
    pub t2: f64,
    /// Axial field at which `t2_star_par` applies, G.
    pub b_z_max: f64,
    pub envelope_exponent: f64,
}

impl Default for DecoherenceParams {
    fn default() -> Self {
        DecoherenceParams {
            t2_star_perp: 10e-6,
            t2_star_par: 2e-6,
            t2: 304e-6,
            b_z_max: 10.0,
            envelope_exponent: 1.0,
        }
    }
}

impl DecoherenceParams {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("t2_star_perp", self.t2_star_perp),
            ("t2_star_par", self.t2_star_par),
            ("t2", self.t2),
            ("b_z_max", self.b_z_max),
            ("envelope_exponent", self.envelope_exponent),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(name, format!("must be finite and > 0, got {v}")));
            }
        }
        if self.t2_star_par >= self.t2_star_perp {
            return Err(Error::invalid(
                "t2_star_par",
                format!("must be below t2_star_perp ({} >= {})", self.t2_star_par, self.t2_star_perp),
            ));
        }
        Ok(())
    }
}

/// Mixing of `|+1>` and `|-1>`: `2|c_+ c_-|` of the upper eigenvector of the
/// `m_s = +-1` block, `sigma / sqrt(sigma^2 + (g mu_B B_z)^2)`.
pub fn mixing_kappa(p: &NVParams, b_z: f64, sigma_perp_freq: f64) -> Result<f64> {
    if !(sigma_perp_freq.is_finite() && sigma_perp_freq > 0.0) {
        return Err(Error::invalid(
            "sigma_perp_freq",
            format!("must be finite and > 0, got {sigma_perp_freq}"),
        ));
    }
    let z = p.zeeman_hz(b_z);
    Ok(sigma_perp_freq / sigma_perp_freq.hypot(z))
}

/// `T2*(B_z) = kappa (T2*_perp - T2*_par) + T2*_par`, s.
pub fn t2star_model(d: &DecoherenceParams, p: &NVParams, sigma_perp_freq: f64, b_z: f64) -> Result<f64> {
    d.validate()?;
    if !(b_z.abs() <= d.b_z_max) {
        return Err(Error::invalid(
            "b_z",
            format!("|{b_z}| G outside [-{0}, {0}] G", d.b_z_max),
        ));
    }
    let k = mixing_kappa(p, b_z, sigma_perp_freq)?;
    Ok(k * (d.t2_star_perp - d.t2_star_par) + d.t2_star_par)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::eigensolve;
    use crate::spin::{SpinMatrix, C64};

    /// Oracle: diagonalize the 2x2 block and read off the amplitudes.
    fn kappa_oracle(z: f64, sigma: f64) -> f64 {
        let h = SpinMatrix::from_rows(&[
            vec![C64::new(z, 0.0), C64::new(sigma, 0.0)],
            vec![C64::new(sigma, 0.0), C64::new(-z, 0.0)],
        ]);
        let es = eigensolve(&h).unwrap();
        let v = es.vector(1);
        2.0 * v[0].norm() * v[1].norm()
    }

    #[test]
    fn kappa_endpoints_and_oracle() {
        let p = NVParams::default();
        let s = 0.189e6;
        assert_eq!(mixing_kappa(&p, 0.0, s).unwrap(), 1.0);
        let b_half = s / p.gamma_e();
        assert!((mixing_kappa(&p, b_half, s).unwrap() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-9);
        assert!(mixing_kappa(&p, 1e6, s).unwrap() < 1e-3);
        for b in [-3.0, -0.07, 0.0, 0.02, 0.5, 4.0] {
            let k = mixing_kappa(&p, b, s).unwrap();
            assert!((k - kappa_oracle(p.zeeman_hz(b), s)).abs() < 1e-9);
            assert!((k - mixing_kappa(&p, -b, s).unwrap()).abs() == 0.0);
            assert!((0.0..=1.0).contains(&k));
        }
        assert!(mixing_kappa(&p, 1.0, 0.0).is_err());
    }

    #[test]
    fn t2star_limits_and_monotonicity() {
        let p = NVParams::default();
        let d = DecoherenceParams::default();
        let s = 0.189e6;
        assert_eq!(t2star_model(&d, &p, s, 0.0).unwrap(), d.t2_star_perp);
        let mut prev = f64::INFINITY;
        for k in 0..=100 {
            let t = t2star_model(&d, &p, s, d.b_z_max * k as f64 / 100.0).unwrap();
            assert!(t <= prev);
            assert!(t >= d.t2_star_par && t <= d.t2_star_perp);
            prev = t;
        }
        assert!(t2star_model(&d, &p, s, 11.0).is_err());
        let wide = DecoherenceParams { b_z_max: 1e7, ..d };
        let far = t2star_model(&wide, &p, s, 1e7).unwrap();
        assert!((far - d.t2_star_par).abs() < 1e-3 * d.t2_star_par);
    }

    #[test]
    fn validation() {
        let bad = DecoherenceParams {
            t2_star_par: 20e-6,
            ..DecoherenceParams::default()
        };
        assert!(bad.validate().is_err());
    }
}
