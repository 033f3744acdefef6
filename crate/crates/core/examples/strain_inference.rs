//! Inferring the non-axial strain from the splitting of the central
//! hyperfine pair at B_z = 0.
//!
//! cargo run --example strain_inference

use std::f64::consts::FRAC_PI_2;

use nv_electrometry::calibration::{central_line_splitting, infer_sigma_perp};
use nv_electrometry::params::NVParams;

fn main() -> nv_electrometry::Result<()> {
    let p = NVParams::default();
    for b_perp in [0.0, 5.0, 23.6] {
        let central = central_line_splitting(&p, 0.189e6, b_perp, FRAC_PI_2)?;
        let sigma = infer_sigma_perp(central, b_perp, &p)?;
        println!(
            "B_perp {b_perp:>5.1} G: central splitting {:.4} MHz -> sigma_perp {:.4} MHz",
            central / 1e6,
            sigma / 1e6
        );
    }
    Ok(())
}
