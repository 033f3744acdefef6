//! Field of one elementary charge at NV-scale distances, and the resulting
//! shift of the upper transition at zero magnetic field.
//!
//! cargo run --example single_charge

use nv_electrometry::params::{ElectricField, MagneticField, NVParams, StrainField};
use nv_electrometry::protocols::point_charge_field;
use nv_electrometry::response::delta_omega_exact;

fn main() -> nv_electrometry::Result<()> {
    let p = NVParams::default();
    let s = StrainField::from_frequency(0.0, 0.189e6, 0.0, &p);
    for r_nm in [10.0, 35.0, 50.0, 100.0, 150.0] {
        let e = point_charge_field(1.0, r_nm * 1e-9)?;
        // Charge in the plane perpendicular to the NV axis.
        let shift = delta_omega_exact(&p, &MagneticField::zero(), &ElectricField::new(0.0, e, 0.0), &s)?;
        println!("{r_nm:>6.0} nm: {e:>10.4e} V/cm, shift {:>8.3} kHz", shift.d_omega_plus / 1e3);
    }
    Ok(())
}
