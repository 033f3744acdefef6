use std::f64::consts::{FRAC_PI_2, PI, TAU};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{normalize_angle, ElectricField, MagneticField, NVParams, StrainField};
use crate::response::delta_omega_perturbative;

use super::optimize::{levenberg_marquardt, nelder_mead, numerical_hessian};

/// Measured polar pattern: in-plane field azimuth (rad), upper-transition
/// shift (Hz) and optional per-point standard deviation (Hz).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolarData {
    pub phi_b: Vec<f64>,
    pub delta_omega: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<Vec<f64>>,
}

/// Field parameters recovered from a polar pattern.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarParams {
    /// G.
    pub b_perp: f64,
    /// Hz.
    pub d_par_e_z: f64,
    /// Hz.
    pub d_perp_e_perp: f64,
    /// rad.
    pub phi_e: f64,
    /// rad.
    pub phi_sigma: f64,
}

impl PolarParams {
    fn to_vec(self) -> Vec<f64> {
        vec![self.b_perp, self.d_par_e_z, self.d_perp_e_perp, self.phi_e, self.phi_sigma]
    }

    fn from_slice(x: &[f64]) -> Self {
        PolarParams {
            b_perp: x[0],
            d_par_e_z: x[1],
            d_perp_e_perp: x[2],
            phi_e: x[3],
            phi_sigma: x[4],
        }
    }

    /// Folds negative magnitudes into the azimuths.
    fn folded(self) -> Self {
        let mut t = self;
        if t.b_perp < 0.0 {
            // B_perp -> -B_perp is phi_B + pi, invisible in 2 phi_B.
            t.b_perp = -t.b_perp;
        }
        if t.d_perp_e_perp < 0.0 {
            t.d_perp_e_perp = -t.d_perp_e_perp;
            t.phi_e += PI;
        }
        t.phi_e = normalize_angle(t.phi_e);
        t.phi_sigma = normalize_angle(t.phi_sigma);
        t
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FitConfig {
    /// Known non-axial strain, frequency view, Hz.
    pub sigma_perp_freq: f64,
    /// Axial field during the scan, G.
    pub b_z: f64,
    /// Local-refinement starts taken from the seeding grid.
    pub n_starts: usize,
    pub max_iterations: u64,
}

impl Default for FitConfig {
    fn default() -> Self {
        FitConfig {
            sigma_perp_freq: 0.189e6,
            b_z: 0.0,
            n_starts: 8,
            max_iterations: 4000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitResult {
    pub params: PolarParams,
    /// One-sigma curvature uncertainties.
    pub uncertainties: PolarParams,
    /// Quarter turns between the lab azimuth origin and the NV frame for
    /// the reported representative.
    pub frame_index: u8,
    pub residual_rms: f64,
    pub chi2: f64,
    pub dof: usize,
    pub converged: bool,
    pub evaluations: usize,
    pub symmetry_note: String,
}

/// Upper-transition shift at lab azimuth `phi_b`. The lab frame is rotated
/// from the NV frame by `frame_index` quarter turns.
pub fn polar_model(p: &NVParams, t: &PolarParams, sigma_perp_freq: f64, b_z: f64, frame_index: u8, phi_b: f64) -> Result<f64> {
    let turn = frame_index as f64 * FRAC_PI_2;
    let b = MagneticField::new(b_z, t.b_perp, phi_b + turn);
    let e = ElectricField::from_frequency(t.d_par_e_z, t.d_perp_e_perp, t.phi_e + turn, p);
    let s = StrainField::from_frequency(0.0, sigma_perp_freq, t.phi_sigma + turn, p);
    Ok(delta_omega_perturbative(p, &b, &e, &s)?.d_omega_plus)
}

/// Representative of an azimuth in `[0, pi/2)`.
pub fn canonicalize_angles(phi: f64) -> f64 {
    let r = phi.rem_euclid(FRAC_PI_2);
    if r >= FRAC_PI_2 {
        0.0
    } else {
        r
    }
}

/// Moves `(phi_e, phi_sigma, frame_index)` to the member of its class with
/// `phi_e` in `[0, pi/2)`. The class is generated by
/// `(phi_e + pi/2, phi_sigma + pi/2, frame_index + 1)`.
pub fn canonicalize_class(t: &PolarParams, frame_index: u8) -> (PolarParams, u8) {
    let m = (t.phi_e / FRAC_PI_2).floor();
    let shift = m * FRAC_PI_2;
    let mut c = *t;
    c.phi_e = canonicalize_angles(t.phi_e - shift);
    c.phi_sigma = normalize_angle(t.phi_sigma - shift);
    let k = (frame_index as i64 - m as i64).rem_euclid(4) as u8;
    (c, k)
}

fn check_data(data: &PolarData) -> Result<Vec<f64>> {
    let n = data.phi_b.len();
    if n != data.delta_omega.len() {
        return Err(Error::invalid("data", "phi_b and delta_omega lengths differ"));
    }
    if n < 8 {
        return Err(Error::invalid("data", format!("need at least 8 angles, got {n}")));
    }
    if data.phi_b.iter().chain(&data.delta_omega).any(|v| !v.is_finite()) {
        return Err(Error::invalid("data", "non-finite entry"));
    }
    let mut a: Vec<f64> = data.phi_b.iter().map(|&x| normalize_angle(x)).collect();
    a.sort_by(f64::total_cmp);
    let largest_gap = a
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(a[0] + TAU - a[n - 1], f64::max);
    if TAU - largest_gap < PI - 1e-9 {
        return Err(Error::invalid("data", "angles must span at least pi"));
    }
    let weights = match &data.sigma {
        None => vec![1.0; n],
        Some(s) => {
            if s.len() != n || s.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
                return Err(Error::invalid("sigma", "need one positive value per point"));
            }
            s.iter().map(|v| 1.0 / (v * v)).collect()
        }
    };
    let lo = data.delta_omega.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = data.delta_omega.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if hi - lo <= 1e-9 * hi.abs().max(lo.abs()).max(1.0) {
        return Err(Error::DegenerateData(format!(
            "shift is constant ({lo:.6e} Hz) over all angles; no pattern to invert"
        )));
    }
    Ok(weights)
}

/// Least-squares inversion of a polar pattern under the second-order model.
///
/// Seeds a grid over `(B_perp, phi_E, phi_sigma)` with amplitude guesses from
/// the data range, refines the best `n_starts` seeds by simplex, polishes the
/// best by Levenberg-Marquardt and reports the canonical class member.
pub fn fit_polar_pattern(data: &PolarData, p: &NVParams, cfg: &FitConfig) -> Result<FitResult> {
    p.validate()?;
    let weights = check_data(data)?;
    let n = data.phi_b.len();
    let residuals = |x: &[f64]| -> Option<Vec<f64>> {
        let t = PolarParams::from_slice(x);
        data.phi_b
            .iter()
            .zip(&data.delta_omega)
            .zip(&weights)
            .map(|((&phi, &y), &w)| {
                polar_model(p, &t, cfg.sigma_perp_freq, cfg.b_z, 0, phi)
                    .ok()
                    .map(|m| w.sqrt() * (m - y))
            })
            .collect()
    };
    let chi2 = |x: &[f64]| residuals(x).map_or(f64::INFINITY, |r| r.iter().map(|v| v * v).sum());

    let lo = data.delta_omega.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = data.delta_omega.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let amp = 0.5 * (hi - lo);
    let mid = 0.5 * (hi + lo);
    let scale = [2.0, 0.1 * amp.max(1.0), 0.1 * amp.max(1.0), 0.2, 0.2];

    let mut seeds: Vec<(f64, Vec<f64>)> = Vec::new();
    for &b in &[5.0, 10.0, 15.0, 20.0, 25.0, 30.0, 40.0] {
        for i in 0..12 {
            for j in 0..12 {
                let x = vec![b, mid, amp, TAU * i as f64 / 12.0, TAU * j as f64 / 12.0];
                seeds.push((chi2(&x), x));
            }
        }
    }
    seeds.sort_by(|a, b| a.0.total_cmp(&b.0));
    let norm = chi2(&[0.0, mid, 0.0, 0.0, 0.0]).max(1e-300);
    let mut evaluations = seeds.len();
    let mut best: Option<(f64, Vec<f64>, bool)> = None;
    for (_, x0) in seeds.iter().take(cfg.n_starts.max(1)) {
        let m = nelder_mead(|x| chi2(x) / norm, x0, &scale, 1e-15, cfg.max_iterations);
        evaluations += m.evaluations;
        let v = m.value * norm;
        if best.as_ref().is_none_or(|b| v < b.0) {
            best = Some((v, m.x, m.converged));
        }
    }
    let (_, x_nm, nm_converged) = best.ok_or_else(|| Error::DegenerateData("no start evaluated".into()))?;
    let polished = levenberg_marquardt(residuals, &x_nm, &scale);
    evaluations += polished.evaluations;
    let (x_best, converged) = if polished.value.is_finite() && polished.value <= chi2(&x_nm) {
        (polished.x, polished.converged || nm_converged)
    } else {
        (x_nm, nm_converged)
    };

    let t = PolarParams::from_slice(&x_best).folded();
    let x = t.to_vec();
    let chi2_min = chi2(&x);
    let dof = n.saturating_sub(5).max(1);
    let hess = numerical_hessian(chi2, &x, &[1.0, 1.0, 1.0, 1.0, 1.0], 1e-4);
    let cov = covariance(&hess, chi2_min / dof as f64);
    let sd = |j: usize| cov[(j, j)].max(0.0).sqrt();
    let uncertainties = PolarParams::from_slice(&[sd(0), sd(1), sd(2), sd(3), sd(4)]);
    let (params, frame_index) = canonicalize_class(&t, 0);
    let rms = {
        let plain: f64 = data
            .phi_b
            .iter()
            .zip(&data.delta_omega)
            .map(|(&phi, &y)| {
                let m = polar_model(p, &t, cfg.sigma_perp_freq, cfg.b_z, 0, phi).unwrap_or(f64::NAN);
                (m - y).powi(2)
            })
            .sum();
        (plain / n as f64).sqrt()
    };
    if !converged {
        log::warn!("polar fit did not meet its convergence criteria; returning best point found");
    }
    Ok(FitResult {
        params,
        uncertainties,
        frame_index,
        residual_rms: rms,
        chi2: chi2_min,
        dof,
        converged,
        evaluations,
        symmetry_note: format!(
            "phi_e, phi_sigma are defined up to a common quarter turn together with the lab-to-NV \
             frame index; reported member has phi_e in [0, 90) deg and frame index {frame_index}"
        ),
    })
}

/// `2 s^2 H^-1` with the Hessian `H` of chi^2 and reduced chi^2 `s^2`;
/// singular directions are dropped by the pseudo-inverse.
fn covariance(hess: &DMatrix<f64>, reduced_chi2: f64) -> DMatrix<f64> {
    let svd = hess.clone().svd(true, true);
    let cutoff = 1e-12 * svd.singular_values.max();
    match svd.pseudo_inverse(cutoff) {
        Ok(inv) => inv * (2.0 * reduced_chi2),
        Err(_) => DMatrix::from_element(hess.nrows(), hess.ncols(), f64::NAN),
    }
}
