use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the crate.
///
/// The CLI maps each variant onto a process exit code through
/// [`Error::exit_code`].
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("matrix is not Hermitian (max |H - H^dagger| = {deviation:.3e}, tolerance {tolerance:.3e})")]
    NotHermitian { deviation: f64, tolerance: f64 },

    #[error("outside the perturbative regime: {0}")]
    Regime(String),

    #[error("unsupported unit conversion: {from} -> {to}")]
    UnsupportedConversion { from: String, to: String },

    #[error("waveform does not cover [{start:.6e}, {end:.6e}] s (defined on [{defined_start:.6e}, {defined_end:.6e}] s)")]
    WaveformDomain {
        start: f64,
        end: f64,
        defined_start: f64,
        defined_end: f64,
    },

    #[error("alignment scan does not bracket a zero crossing: {0}")]
    NoBracket(String),

    #[error("degenerate data: {0}")]
    DegenerateData(String),

    #[error("{path}: line {line}: {message}")]
    Parse {
        path: PathBuf,
        line: u64,
        message: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code: 2 usage, 3 physics regime, 4 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Regime(_) | Error::NotHermitian { .. } | Error::NoBracket(_) => 3,
            Error::DegenerateData(_) => 3,
            Error::Parse { .. } | Error::Io { .. } | Error::Json(_) => 4,
            Error::InvalidParameter { .. }
            | Error::UnsupportedConversion { .. }
            | Error::WaveformDomain { .. } => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
