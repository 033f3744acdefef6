//! Zero-field eigenstates of a strained NV: all three carry zero spin
//! expectation, which is what makes them insensitive to magnetic noise.
//!
//! cargo run --example zero_field_states

use nv_electrometry::hamiltonian::{build_hamiltonian, spin_expectation};
use nv_electrometry::params::{effective_field, ElectricField, MagneticField, NVParams, StrainField};
use nv_electrometry::response::zero_field_eigenstates;

fn main() {
    let p = NVParams::default();
    let phi_sigma = 22f64.to_radians();
    let s = StrainField::from_frequency(0.0, 0.189e6, phi_sigma, &p);
    let h = build_hamiltonian(&p, &MagneticField::zero(), &effective_field(&ElectricField::zero(), &s));
    let states = zero_field_eigenstates(phi_sigma);
    for (name, v) in ["S0", "S+", "S-"].iter().zip(states.all()) {
        let [sx, sy, sz] = spin_expectation(v);
        let energy = h.expectation(v, v).re;
        println!("{name}: E = {:>14.3} kHz   <S> = ({sx:.1e}, {sy:.1e}, {sz:.1e})", energy / 1e3);
        for c in v {
            print!("   {:+.4}{:+.4}i", c.re, c.im);
        }
        println!();
    }
}
