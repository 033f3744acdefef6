//! Electric-field response of the magnetic transitions: second-order shift
//! formulas, field scans, zero-field eigenstates and the axial-field control
//! of `|+1>`/`|-1>` mixing.

mod decoherence;
mod scan;
mod shift;
mod zero_field;

pub use decoherence::{mixing_kappa, t2star_model, DecoherenceParams};
pub(crate) use scan::axial_decay_scan_at;
pub use scan::{axial_decay_scan, count_lobes, polar_scan, AxialPoint, PolarPoint};
pub use shift::{
    delta_omega, delta_omega_exact, delta_omega_perturbative, f_function, regime_ratios, Method,
    TransitionShift, REGIME_REJECT_RATIO, REGIME_WARN_RATIO,
};
pub use zero_field::{zero_field_eigenstates, ZeroFieldStates};
