use serde::Serialize;

use crate::calibration::{hyperfine_hamiltonian, hyperfine_lines};
use crate::error::{Error, Result};
use crate::params::{effective_field, ElectricField, MagneticField, NVParams, StrainField};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectrumPoint {
    /// Hz.
    pub frequency: f64,
    /// Fluorescence relative to the off-resonant level.
    pub fluorescence: f64,
}

/// CW ODMR spectrum: unit baseline with a Lorentzian dip (FWHM
/// `linewidth`) at each of the six hyperfine lines. Each line has depth
/// `contrast / 6`, so two coincident lines of one nuclear projection reach
/// that projection's third of the contrast.
pub fn cw_odmr_spectrum(
    p: &NVParams,
    b: &MagneticField,
    e: &ElectricField,
    s: &StrainField,
    linewidth: f64,
    contrast: f64,
    freq_grid: &[f64],
) -> Result<Vec<SpectrumPoint>> {
    if !(linewidth.is_finite() && linewidth > 0.0) {
        return Err(Error::invalid("linewidth", format!("must be finite and > 0, got {linewidth}")));
    }
    if !(0.0..=1.0).contains(&contrast) {
        return Err(Error::invalid("contrast", format!("must lie in [0, 1], got {contrast}")));
    }
    let sys = hyperfine_hamiltonian(p, b, &effective_field(e, s), false)?;
    let lines = hyperfine_lines(&sys)?;
    let hw2 = (0.5 * linewidth).powi(2);
    Ok(freq_grid
        .iter()
        .map(|&f| {
            let dip: f64 = lines
                .iter()
                .map(|l| hw2 / ((f - l.frequency).powi(2) + hw2))
                .sum();
            SpectrumPoint {
                frequency: f,
                fluorescence: 1.0 - contrast / 6.0 * dip,
            }
        })
        .collect())
}

/// Local minima of a spectrum below `1 - threshold`.
pub fn spectrum_dips(spectrum: &[SpectrumPoint], threshold: f64) -> Vec<f64> {
    spectrum
        .windows(3)
        .filter(|w| {
            w[1].fluorescence < w[0].fluorescence
                && w[1].fluorescence <= w[2].fluorescence
                && w[1].fluorescence < 1.0 - threshold
        })
        .map(|w| w[1].frequency)
        .collect()
}
