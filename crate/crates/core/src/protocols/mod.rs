//! Measurement protocols: CW ODMR spectra, free-induction and Hahn-echo
//! electrometry signals, photon shot noise and sensitivity.

mod charge;
mod odmr;
mod phase;
mod sensitivity;
mod sequence;
mod signal;

pub use charge::{point_charge_field, COULOMB_K, ELEMENTARY_CHARGE};
pub use odmr::{cw_odmr_spectrum, spectrum_dips, SpectrumPoint};
pub use phase::{
    phase_fid, phase_hahn, sequence_phase, DetuningProfile, PiecewiseDetuning, SampledDetuning, DEFAULT_STEPS,
};
pub use sensitivity::{
    calibrate_photon_budget, fringe_slope, log_log_slope, min_detectable_field, optimal_tau, sensitivity_curve,
    sensitivity_report, shot_time, SensitivityPoint, SensitivityReport, DEFAULT_MC_POINTS,
};
pub use sequence::{PiecewiseConstant, PulseSequence, SequenceKind};
pub use signal::{fringe_sweep, signal_intensity, simulate_averaged, simulate_readout, ReadoutStats, SignalModel};
