//! Recovering field parameters from a measured polar pattern.
//!
//! cargo run --example polar_fit [polar.csv]
//!
//! The CSV has columns `phi_b_deg,delta_omega_hz[,sigma_hz]`; the default is
//! the noisy fixture shipped with the crate.

use std::path::PathBuf;

use nv_electrometry::calibration::{fit_polar_pattern, FitConfig};
use nv_electrometry::io::read_polar_data;
use nv_electrometry::params::NVParams;

fn main() -> nv_electrometry::Result<()> {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/polar_noisy.csv"));
    let data = read_polar_data(&path)?;
    let fit = fit_polar_pattern(&data, &NVParams::default(), &FitConfig::default())?;
    let (t, u) = (fit.params, fit.uncertainties);
    println!("{}: {} points", path.display(), data.phi_b.len());
    println!("B_perp        = {:.3} +- {:.3} G", t.b_perp, u.b_perp);
    println!("d_par E_z     = {:.2} +- {:.2} kHz", t.d_par_e_z / 1e3, u.d_par_e_z / 1e3);
    println!("d_perp E_perp = {:.2} +- {:.2} kHz", t.d_perp_e_perp / 1e3, u.d_perp_e_perp / 1e3);
    println!("phi_E         = {:.2} +- {:.2} deg", t.phi_e.to_degrees(), u.phi_e.to_degrees());
    println!("phi_sigma     = {:.2} +- {:.2} deg", t.phi_sigma.to_degrees(), u.phi_sigma.to_degrees());
    println!("frame index {}, rms residual {:.0} Hz, chi2/dof {:.2}", fit.frame_index, fit.residual_rms, fit.chi2 / fit.dof as f64);
    println!("{}", fit.symmetry_note);
    Ok(())
}
