//! Ground-state spin Hamiltonian and its magnetic transition frequencies.
//!
//! ```text
//! H/h = (D + d_par Pi_z) [S_z^2 - 2/3] + (g_e mu_B / h) S.B
//!       - d_perp [ Pi_x (S_x^2 - S_y^2) - Pi_y (S_x S_y + S_y S_x) ]
//! ```
//!
//! The non-axial Stark term couples `|+1>` and `|-1>` through the matrix
//! element `<+1|H|-1> = -d_perp (Pi_x + i Pi_y)`. This is the convention for
//! which the second-order shift formula in [`crate::response::f_function`] (cross term
//! `Pi_x cos 2phi_B - Pi_y sin 2phi_B`) is the exact perturbative limit.
//! Writing `Pi_x` on `S_x S_y + S_y S_x` and `Pi_y` on `S_x^2 - S_y^2`
//! instead rotates the quadrupolar phase by 90 degrees and breaks that
//! agreement. Both Stark coefficients are taken positive.

use crate::eigen::{eigensolve, EigenSystem};
use crate::error::Result;
use crate::params::{EffectiveField, MagneticField, NVParams};
use crate::spin::{spin_operators, SpinMatrix, SpinOperators, C64};

/// Index of `|0>` in the electron basis.
pub const MS_ZERO: usize = 1;

/// Electron-only (3x3) Hamiltonian in Hz.
pub fn build_hamiltonian(p: &NVParams, b: &MagneticField, pi: &EffectiveField) -> SpinMatrix {
    let s = spin_operators();
    build_with(&s, p, b, pi)
}

pub(crate) fn build_with(
    s: &SpinOperators,
    p: &NVParams,
    b: &MagneticField,
    pi: &EffectiveField,
) -> SpinMatrix {
    let id = SpinMatrix::identity(3);
    let sz2 = &s.sz * &s.sz;
    let axial = (&sz2 - &id.scale(2.0 / 3.0)).scale(p.d_gs + p.d_par * pi.pi_z);

    let [bx, by, bz] = b.cartesian();
    let g = p.gamma_e();
    let zeeman = &(&s.sx.scale(g * bx) + &s.sy.scale(g * by)) + &s.sz.scale(g * bz);

    let quad_x = &(&s.sx * &s.sx) - &(&s.sy * &s.sy);
    let quad_y = &(&s.sx * &s.sy) + &(&s.sy * &s.sx);
    let stark = (&quad_x.scale(pi.pi_x) - &quad_y.scale(pi.pi_y)).scale(-p.d_perp);

    &(&axial + &zeeman) + &stark
}

/// Magnetic transition frequencies `m_s = 0 -> upper` and `m_s = 0 -> lower`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionPair {
    /// Upper branch (`omega_+`), Hz.
    pub plus: f64,
    /// Lower branch (`omega_-`), Hz.
    pub minus: f64,
}

/// Labels the eigenstates of a 3x3 electron block: `(zero, lower, upper)`.
///
/// The `m_s = 0` branch is the eigenvector with the largest `|<0|v>|^2`,
/// i.e. the state adiabatically connected to `|0>`; the remaining two are the
/// `m_s = +-1` doublet ordered by energy.
pub(crate) fn label_branches(es: &EigenSystem, zero_index: usize) -> (usize, usize, usize) {
    let weight = |k: usize| es.vectors[(zero_index, k)].norm_sqr();
    let zero = (0..es.values.len())
        .max_by(|&a, &b| weight(a).total_cmp(&weight(b)).then(b.cmp(&a)))
        .unwrap_or(0);
    let mut rest = (0..es.values.len()).filter(|&k| k != zero);
    let lower = rest.next().unwrap_or(0);
    let upper = rest.next().unwrap_or(0);
    (zero, lower, upper)
}

/// Exact transition frequencies from full diagonalization.
///
/// At exact degeneracy of the doublet both branches coincide and the two
/// values are returned equal.
pub fn transition_frequencies(
    p: &NVParams,
    b: &MagneticField,
    pi: &EffectiveField,
) -> Result<TransitionPair> {
    let h = build_hamiltonian(p, b, pi);
    let es = eigensolve(&h)?;
    let (zero, lower, upper) = label_branches(&es, MS_ZERO);
    Ok(TransitionPair {
        plus: es.values[upper] - es.values[zero],
        minus: es.values[lower] - es.values[zero],
    })
}

/// Expectation values `(<S_x>, <S_y>, <S_z>)` of a normalized state.
pub fn spin_expectation(state: &[C64]) -> [f64; 3] {
    let s = spin_operators();
    [
        s.sx.expectation(state, state).re,
        s.sy.expectation(state, state).re,
        s.sz.expectation(state, state).re,
    ]
}
