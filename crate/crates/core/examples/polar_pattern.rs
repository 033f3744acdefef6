//! Shift of the upper transition versus the azimuth of a 23.6 G in-plane
//! field, from the second-order formula and from full diagonalization.
//!
//! cargo run --example polar_pattern

use nv_electrometry::params::{ElectricField, NVParams, StrainField};
use nv_electrometry::response::{count_lobes, polar_scan, Method};

fn main() -> nv_electrometry::Result<()> {
    let p = NVParams::default();
    let e = ElectricField::from_frequency(-4.19e3, 81.6e3, 32f64.to_radians(), &p);
    let s = StrainField::from_frequency(0.0, 0.189e6, 22f64.to_radians(), &p);

    let exact = polar_scan(&p, 23.6, 0.0, &e, &s, 360, Method::Exact)?;
    let pert = polar_scan(&p, 23.6, 0.0, &e, &s, 360, Method::Perturbative)?;

    println!("{:>8} {:>12} {:>12}", "phi_B", "exact [kHz]", "pert [kHz]");
    for (x, q) in exact.iter().zip(&pert).step_by(15) {
        println!(
            "{:>8.0} {:>12.2} {:>12.2}",
            x.phi_b.to_degrees(),
            x.d_omega_plus / 1e3,
            q.d_omega_plus / 1e3
        );
    }
    let v: Vec<f64> = exact.iter().map(|x| x.d_omega_plus).collect();
    let max = v.iter().cloned().fold(f64::MIN, f64::max);
    let min = v.iter().cloned().fold(f64::MAX, f64::min);
    println!("lobes: {}", count_lobes(&v));
    println!("extrema: {:.2} / {:.2} kHz (d_par E_z +- d_perp E_perp = {:.2} / {:.2})", max / 1e3, min / 1e3, (-4.19 + 81.6), (-4.19 - 81.6));
    Ok(())
}
