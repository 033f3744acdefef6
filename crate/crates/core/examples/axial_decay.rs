//! How an axial magnetic field quenches the non-axial Stark response, leaving
//! only the axial shift `d_par E_z` at large `B_z`.
//!
//! cargo run --example axial_decay

use nv_electrometry::params::{ElectricField, NVParams, StrainField};
use nv_electrometry::response::axial_decay_scan;

fn main() -> nv_electrometry::Result<()> {
    let p = NVParams::default();
    let e = ElectricField::from_frequency(-4.19e3, 81.6e3, 32f64.to_radians(), &p);
    let s = StrainField::from_frequency(0.0, 0.189e6, 22f64.to_radians(), &p);
    let grid = [0.0, 0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0, 50.0, 200.0];
    let scan = axial_decay_scan(&p, 23.6, &e, &s, &grid)?;
    println!("{:>8} {:>14} {:>12}", "B_z [G]", "shift [kHz]", "normalized");
    for pt in &scan {
        println!("{:>8.1} {:>14.3} {:>12.4}", pt.b_z, pt.d_omega_plus / 1e3, pt.normalized);
    }
    println!("d_par E_z = {:.3} kHz", p.d_par * e.e_z() / 1e3);
    Ok(())
}
