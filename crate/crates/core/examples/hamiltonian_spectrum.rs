//! Eigenvalues and magnetic transitions of the ground-state triplet while an
//! axial field is swept through zero, with and without strain.
//!
//! cargo run --example hamiltonian_spectrum

use nv_electrometry::eigen::eigensolve;
use nv_electrometry::hamiltonian::{build_hamiltonian, transition_frequencies};
use nv_electrometry::params::{effective_field, ElectricField, MagneticField, NVParams, StrainField};
use nv_electrometry::units::{convert_units, Unit};

fn main() -> nv_electrometry::Result<()> {
    let p = NVParams::default();
    let strain = StrainField::from_frequency(0.0, 0.189e6, 0.0, &p);
    let pi = effective_field(&ElectricField::zero(), &strain);

    println!("{:>8} {:>14} {:>14} {:>14} {:>12}", "B_z [G]", "E0 [MHz]", "E1 [MHz]", "E2 [MHz]", "w+ - w- [MHz]");
    for k in -4..=4 {
        let b_z = 0.05 * k as f64;
        let b = MagneticField::new(b_z, 0.0, 0.0);
        let es = eigensolve(&build_hamiltonian(&p, &b, &pi))?;
        let t = transition_frequencies(&p, &b, &pi)?;
        println!(
            "{b_z:>8.2} {:>14.4} {:>14.4} {:>14.4} {:>12.4}",
            es.values[0] / 1e6,
            es.values[1] / 1e6,
            es.values[2] / 1e6,
            (t.plus - t.minus) / 1e6
        );
    }
    // At zero field the doublet splitting is 2 d_perp sigma_perp.
    let t = transition_frequencies(&p, &MagneticField::zero(), &pi)?;
    println!("zero-field doublet splitting: {:.1} kHz", (t.plus - t.minus) / 1e3);
    println!("0.189 MHz of strain = {:.1} V/cm", convert_units(0.189e6, Unit::PerpFrequencyHz, Unit::VoltPerCm, &p)?);
    Ok(())
}
