use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{EffectiveField, MagneticField, NVParams};

use super::hyperfine::{hyperfine_hamiltonian, hyperfine_lines, outer_pair_splitting};

/// Outer-line splittings recorded while sweeping a coil control value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlignmentScan {
    /// Control values (coil-current proxy), arbitrary units.
    pub control: Vec<f64>,
    /// Unsigned same-`m_I` outer-pair splittings, Hz.
    pub splitting_hz: Vec<f64>,
    /// Axial field at each point when the scan was synthesized, G.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub true_b_z: Option<Vec<f64>>,
}

impl AlignmentScan {
    pub fn validate(&self) -> Result<()> {
        if self.control.len() != self.splitting_hz.len() {
            return Err(Error::invalid("scan", "control and splitting lengths differ"));
        }
        if self.control.len() < 3 {
            return Err(Error::invalid("scan", format!("need at least 3 points, got {}", self.control.len())));
        }
        if self.splitting_hz.iter().any(|s| !(s.is_finite() && *s >= 0.0)) {
            return Err(Error::invalid("scan", "splittings must be finite and >= 0"));
        }
        if self.control.iter().any(|c| !c.is_finite()) || self.control.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid("scan", "control values must be finite and strictly increasing"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlignmentResult {
    /// Control value at which the axial field vanishes.
    pub control_zero: f64,
    /// Local slope of the signed splitting, Hz per control unit.
    pub slope_hz_per_unit: f64,
    /// Linewidth-limited uncertainty of `control_zero`.
    pub control_uncertainty: f64,
    /// Residual axial field uncertainty, mT.
    pub b_z_uncertainty_mt: f64,
}

/// Synthesizes a scan with `B_z = gauss_per_unit (control - control_zero)`.
#[allow(clippy::too_many_arguments)]
pub fn synthesize_alignment_scan(
    p: &NVParams,
    control: &[f64],
    control_zero: f64,
    gauss_per_unit: f64,
    b_perp: f64,
    phi_b: f64,
    pi: &EffectiveField,
) -> Result<AlignmentScan> {
    let mut splitting = Vec::with_capacity(control.len());
    let mut b_z = Vec::with_capacity(control.len());
    for &c in control {
        let bz = gauss_per_unit * (c - control_zero);
        let sys = hyperfine_hamiltonian(p, &MagneticField::new(bz, b_perp, phi_b), pi, false)?;
        splitting.push(outer_pair_splitting(&hyperfine_lines(&sys)?).abs());
        b_z.push(bz);
    }
    Ok(AlignmentScan {
        control: control.to_vec(),
        splitting_hz: splitting,
        true_b_z: Some(b_z),
    })
}

fn line_fit_residual(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    x.iter()
        .zip(y)
        .map(|(a, b)| (b - my - slope * (a - mx)).powi(2))
        .sum()
}

/// Signs the unsigned splittings. The flip sits next to the minimum; of the
/// two candidate positions the one whose neighbourhood is most linear wins.
pub fn signed_splittings(scan: &AlignmentScan) -> Result<Vec<f64>> {
    scan.validate()?;
    let d = &scan.splitting_hz;
    let n = d.len();
    let imin = (0..n).min_by(|&a, &b| d[a].total_cmp(&d[b])).unwrap_or(0);
    let candidates: Vec<usize> = [imin, imin + 1].into_iter().filter(|&k| k >= 1 && k < n).collect();
    let at_edge = (imin == 0 || imin == n - 1) && d[imin] > 0.0;
    if at_edge || candidates.is_empty() {
        return Err(Error::NoBracket(format!(
            "minimum splitting {:.3e} Hz sits at the scan edge (control {})",
            d[imin], scan.control[imin]
        )));
    }
    let signed_with = |k: usize| -> Vec<f64> {
        d.iter()
            .enumerate()
            .map(|(i, &v)| if i < k { -v } else { v })
            .collect()
    };
    let lo = imin.saturating_sub(3);
    let hi = (imin + 4).min(n);
    let best = candidates
        .iter()
        .map(|&k| {
            let s = signed_with(k);
            (k, line_fit_residual(&scan.control[lo..hi], &s[lo..hi]))
        })
        .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)))
        .map(|(k, _)| k)
        .unwrap_or(imin);
    Ok(signed_with(best))
}

/// Control value where the outer hyperfine pair overlaps, by linear
/// interpolation of the signed splitting across its sign change.
pub fn align_axial_field(scan: &AlignmentScan, linewidth_hz: f64, p: &NVParams) -> Result<AlignmentResult> {
    if !(linewidth_hz.is_finite() && linewidth_hz > 0.0) {
        return Err(Error::invalid("linewidth_hz", "must be finite and > 0"));
    }
    let s = signed_splittings(scan)?;
    let x = &scan.control;
    // An exact zero at a grid point needs no interpolation.
    if let Some(i) = s.iter().position(|&v| v == 0.0) {
        let j = if i + 1 < s.len() { i + 1 } else { i - 1 };
        let slope = (s[j] - s[i]) / (x[j] - x[i]);
        return Ok(result(x[i], slope, linewidth_hz, p));
    }
    let k = (1..s.len())
        .find(|&k| s[k - 1] < 0.0 && s[k] > 0.0)
        .ok_or_else(|| Error::NoBracket("signed splitting has no sign change".into()))?;
    let slope = (s[k] - s[k - 1]) / (x[k] - x[k - 1]);
    let zero = x[k - 1] - s[k - 1] / slope;
    Ok(result(zero, slope, linewidth_hz, p))
}

fn result(control_zero: f64, slope: f64, linewidth_hz: f64, p: &NVParams) -> AlignmentResult {
    AlignmentResult {
        control_zero,
        slope_hz_per_unit: slope,
        control_uncertainty: linewidth_hz / slope.abs(),
        // Outer partners separate by 2 g mu_B B_z; 1 mT = 10 G.
        b_z_uncertainty_mt: linewidth_hz / (2.0 * p.gamma_e()) / 10.0,
    }
}
