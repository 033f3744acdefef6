//! Simulation and analysis toolkit for electric field sensing with the
//! ground-state spin of a single nitrogen-vacancy (NV) centre.

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod calibration;
pub mod cli;
pub mod eigen;
pub mod error;
pub mod hamiltonian;
pub mod io;
pub mod params;
pub mod protocols;
pub mod response;
pub mod spin;
pub mod units;

pub use error::{Error, Result};
