//! Strain-induced mixing of |+1> and |-1> and the phenomenological T2*
//! that follows from it as the axial field grows.
//!
//! cargo run --example t2star_mixing

use nv_electrometry::params::NVParams;
use nv_electrometry::response::{mixing_kappa, t2star_model, DecoherenceParams};

fn main() -> nv_electrometry::Result<()> {
    let p = NVParams::default();
    let d = DecoherenceParams::default();
    let sigma = 0.189e6;
    println!("crossover at B_z = {:.4} G", sigma / p.gamma_e());
    println!("{:>8} {:>8} {:>10}", "B_z [G]", "kappa", "T2* [us]");
    for b_z in [0.0, 0.02, 0.05, 0.0674, 0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0] {
        println!(
            "{b_z:>8.3} {:>8.4} {:>10.3}",
            mixing_kappa(&p, b_z, sigma)?,
            t2star_model(&d, &p, sigma, b_z)? * 1e6
        );
    }
    Ok(())
}
