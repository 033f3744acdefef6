//! Hyperfine-resolved CW ODMR: six lines from the 14N nucleus, located by
//! dip search on the simulated spectrum.
//!
//! cargo run --example odmr_hyperfine

use nv_electrometry::calibration::{hyperfine_hamiltonian, hyperfine_lines};
use nv_electrometry::params::{effective_field, ElectricField, MagneticField, NVParams, StrainField};
use nv_electrometry::protocols::{cw_odmr_spectrum, spectrum_dips};

fn main() -> nv_electrometry::Result<()> {
    let p = NVParams::default();
    let b = MagneticField::new(5.0, 0.0, 0.0);
    let e = ElectricField::zero();
    let s = StrainField::from_frequency(0.0, 0.189e6, 0.0, &p);

    let sys = hyperfine_hamiltonian(&p, &b, &effective_field(&e, &s), false)?;
    for l in hyperfine_lines(&sys)? {
        println!("m_I = {:+} {:?}: {:.4} MHz", l.m_i, l.branch, l.frequency / 1e6);
    }
    let grid: Vec<f64> = (0..=6000).map(|k| p.d_gs - 30e6 + 1e4 * k as f64).collect();
    let spectrum = cw_odmr_spectrum(&p, &b, &e, &s, 0.3e6, 0.3, &grid)?;
    let dips = spectrum_dips(&spectrum, 0.01);
    println!("dips found: {}", dips.len());
    for f in dips {
        println!("  {:.3} MHz", f / 1e6);
    }
    Ok(())
}
