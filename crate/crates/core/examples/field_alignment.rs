//! Zeroing the axial field: the same-m_I outer lines cross where B_z = 0,
//! even with a strong in-plane field mixing the spin states.
//!
//! cargo run --example field_alignment [scan.csv]
//!
//! Without an argument a scan is synthesized with its zero at control 0.37.

use nv_electrometry::calibration::{align_axial_field, signed_splittings, synthesize_alignment_scan};
use nv_electrometry::io::read_alignment_scan;
use nv_electrometry::params::{effective_field, ElectricField, NVParams, StrainField};

fn main() -> nv_electrometry::Result<()> {
    let p = NVParams::default();
    let scan = match std::env::args().nth(1) {
        Some(path) => read_alignment_scan(path.as_ref())?,
        None => {
            let s = StrainField::from_frequency(0.0, 0.189e6, 0.4, &p);
            let pi = effective_field(&ElectricField::zero(), &s);
            let control: Vec<f64> = (0..=40).map(|k| -1.0 + 0.05 * k as f64).collect();
            synthesize_alignment_scan(&p, &control, 0.37, 2.0, 23.6, 0.0, &pi)?
        }
    };
    let signed = signed_splittings(&scan)?;
    for ((c, s), u) in scan.control.iter().zip(&signed).zip(&scan.splitting_hz).step_by(4) {
        println!("control {c:>6.2}: |splitting| {:>8.3} MHz, signed {:>8.3} MHz", u / 1e6, s / 1e6);
    }
    let r = align_axial_field(&scan, 0.1e6, &p)?;
    println!(
        "zero at control {:.5} +- {:.5} (residual B_z uncertainty {:.4} mT)",
        r.control_zero, r.control_uncertainty, r.b_z_uncertainty_mt
    );
    Ok(())
}
