//! Hyperfine-resolved spectra, axial-field alignment, strain inference and
//! inversion of measured polar patterns.

mod alignment;
mod fit;
mod hyperfine;
pub mod optimize;
mod strain;

pub use alignment::{align_axial_field, signed_splittings, synthesize_alignment_scan, AlignmentResult, AlignmentScan};
pub use fit::{
    canonicalize_angles, canonicalize_class, fit_polar_pattern, polar_model, FitConfig, FitResult, PolarData,
    PolarParams,
};
pub use hyperfine::{
    central_splitting, hyperfine_hamiltonian, hyperfine_lines, line, outer_pair_splitting, Branch, HyperfineLine,
    HyperfineSystem, M_I,
};
pub use strain::{central_line_splitting, infer_sigma_perp, infer_sigma_perp_at};
