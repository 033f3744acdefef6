use std::f64::consts::FRAC_1_SQRT_2;

use crate::spin::{C64, I, ONE, ZERO};

/// Eigenstates of the strained zero-field Hamiltonian in the
/// `{|+1>, |0>, |-1>}` basis.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroFieldStates {
    pub s0: [C64; 3],
    /// Upper state, energy `D/3 + d_perp sigma_perp`.
    pub s_plus: [C64; 3],
    /// Lower state, energy `D/3 - d_perp sigma_perp`; carries a global `i`.
    pub s_minus: [C64; 3],
}

impl ZeroFieldStates {
    pub fn all(&self) -> [&[C64; 3]; 3] {
        [&self.s0, &self.s_plus, &self.s_minus]
    }
}

/// `|S_0> = |0>`, `|S_+> = (e^{i phi/2}|+1> - e^{-i phi/2}|-1>)/sqrt 2`,
/// `|S_-> = i (e^{i phi/2}|+1> + e^{-i phi/2}|-1>)/sqrt 2`.
///
/// The half-angle phases follow the Hamiltonian's `<+1|H|-1>` phase
/// `e^{i phi_sigma}`, so the states are exact eigenvectors of it.
pub fn zero_field_eigenstates(phi_sigma: f64) -> ZeroFieldStates {
    let half = C64::from_polar(FRAC_1_SQRT_2, phi_sigma / 2.0);
    let half_c = half.conj();
    ZeroFieldStates {
        s0: [ZERO, ONE, ZERO],
        s_plus: [half, ZERO, -half_c],
        s_minus: [I * half, ZERO, I * half_c],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::{build_hamiltonian, spin_expectation};
    use crate::params::{effective_field, ElectricField, MagneticField, NVParams, StrainField};

    #[test]
    fn phi_zero_substitution() {
        let z = zero_field_eigenstates(0.0);
        assert!((z.s_plus[0] - C64::new(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        assert!((z.s_plus[2] + C64::new(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn vanishing_spin_expectation_and_orthonormality() {
        for k in 0..50 {
            let z = zero_field_eigenstates(0.13 * k as f64);
            let states = z.all();
            for (a, u) in states.iter().enumerate() {
                for c in spin_expectation(&u[..]) {
                    assert!(c.abs() < 1e-12);
                }
                for (b, v) in states.iter().enumerate() {
                    let ip: C64 = u.iter().zip(v.iter()).map(|(x, y)| x.conj() * y).sum();
                    let want = if a == b { 1.0 } else { 0.0 };
                    assert!((ip - C64::new(want, 0.0)).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn states_diagonalize_strained_hamiltonian() {
        let p = NVParams::default();
        let sigma = 1.1e4;
        for k in 0..20 {
            let phi = 0.31 * k as f64;
            let pi = effective_field(&ElectricField::zero(), &StrainField::new(0.0, sigma, phi));
            let h = build_hamiltonian(&p, &MagneticField::zero(), &pi);
            let z = zero_field_eigenstates(phi);
            let energies = [
                -2.0 * p.d_gs / 3.0,
                p.d_gs / 3.0 + p.d_perp * sigma,
                p.d_gs / 3.0 - p.d_perp * sigma,
            ];
            for (state, e) in z.all().iter().zip(energies) {
                let hv = h.mul_vec(&state[..]);
                let resid: f64 = hv
                    .iter()
                    .zip(state.iter())
                    .map(|(a, b)| (a - b * e).norm_sqr())
                    .sum::<f64>()
                    .sqrt();
                assert!(resid <= 1e-10 * h.norm(), "{resid}");
            }
        }
    }
}
