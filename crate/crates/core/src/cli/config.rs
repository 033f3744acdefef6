//! Run configuration: a flat JSON object whose keys override built-in
//! defaults, themselves overridden by command-line flags.
//!
//! Keys (all optional):
//!
//! | key | unit | meaning |
//! |-----|------|---------|
//! | `d_gs`, `d_par`, `d_perp`, `g_e`, `mu_b_over_h`, `a_hf` | Hz, Hz·cm/V, -, Hz/G | [`NVParams`] |
//! | `t2_star_perp`, `t2_star_par`, `t2`, `b_z_max`, `envelope_exponent` | s, G, - | [`DecoherenceParams`] |
//! | `contrast`, `photons_per_readout`, `shot_overhead`, `central_line_only` | -, -, s, bool | photon budget |
//! | `seed` | - | Monte-Carlo seed |
//! | `out` | path | output directory |
//! | `format` | `"csv"` or `"json"` | tabular output encoding |

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::Format;
use crate::params::NVParams;
use crate::protocols::{SequenceKind, SignalModel};
use crate::response::DecoherenceParams;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub d_gs: Option<f64>,
    pub d_par: Option<f64>,
    pub d_perp: Option<f64>,
    pub g_e: Option<f64>,
    pub mu_b_over_h: Option<f64>,
    pub a_hf: Option<f64>,

    pub t2_star_perp: Option<f64>,
    pub t2_star_par: Option<f64>,
    pub t2: Option<f64>,
    pub b_z_max: Option<f64>,
    pub envelope_exponent: Option<f64>,

    pub contrast: Option<f64>,
    pub photons_per_readout: Option<f64>,
    pub shot_overhead: Option<f64>,
    pub central_line_only: Option<bool>,

    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

impl RunConfig {
    pub fn from_json_str(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| match e.classify() {
            // Well-formed JSON with unknown keys or wrong types is a usage error.
            serde_json::error::Category::Data => Error::InvalidParameter {
                name: "config",
                reason: format!("{}: {e}", path.display()),
            },
            _ => Error::Parse {
                path: path.to_path_buf(),
                line: e.line() as u64,
                message: e.to_string(),
            },
        })
    }

    /// Fills every unset key of `self` from `base`.
    pub fn or(self, base: RunConfig) -> RunConfig {
        macro_rules! pick {
            ($($f:ident),*) => { RunConfig { $($f: self.$f.or(base.$f)),* } };
        }
        pick!(
            d_gs, d_par, d_perp, g_e, mu_b_over_h, a_hf, t2_star_perp, t2_star_par, t2, b_z_max,
            envelope_exponent, contrast, photons_per_readout, shot_overhead, central_line_only, seed, out,
            format
        )
    }

    /// Applies defaults and validates every physical value.
    pub fn resolve(&self) -> Result<Settings> {
        let dn = NVParams::default();
        let nv = NVParams {
            d_gs: self.d_gs.unwrap_or(dn.d_gs),
            d_par: self.d_par.unwrap_or(dn.d_par),
            d_perp: self.d_perp.unwrap_or(dn.d_perp),
            g_e: self.g_e.unwrap_or(dn.g_e),
            mu_b_over_h: self.mu_b_over_h.unwrap_or(dn.mu_b_over_h),
            a_hf: self.a_hf.unwrap_or(dn.a_hf),
        };
        nv.validate()?;
        let dd = DecoherenceParams::default();
        let decoherence = DecoherenceParams {
            t2_star_perp: self.t2_star_perp.unwrap_or(dd.t2_star_perp),
            t2_star_par: self.t2_star_par.unwrap_or(dd.t2_star_par),
            t2: self.t2.unwrap_or(dd.t2),
            b_z_max: self.b_z_max.unwrap_or(dd.b_z_max),
            envelope_exponent: self.envelope_exponent.unwrap_or(dd.envelope_exponent),
        };
        decoherence.validate()?;
        let db = SignalModel::for_kind(SequenceKind::HahnEcho, &decoherence);
        let budget = PhotonBudget {
            contrast: self.contrast.unwrap_or(db.contrast),
            photons_per_readout: self.photons_per_readout.unwrap_or(db.photons_per_readout),
            shot_overhead: self.shot_overhead.unwrap_or(db.shot_overhead),
            central_line_only: self.central_line_only.unwrap_or(db.central_line_only),
        };
        let settings = Settings {
            nv,
            decoherence,
            budget,
            seed: self.seed.unwrap_or(DEFAULT_SEED),
            out: self.out.clone().unwrap_or_else(|| PathBuf::from(".")),
            format: self.format.unwrap_or_default(),
        };
        settings.signal_model(SequenceKind::HahnEcho).validate()?;
        Ok(settings)
    }
}

pub const DEFAULT_SEED: u64 = 1;

/// Readout parameters shared by both sequence kinds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhotonBudget {
    pub contrast: f64,
    pub photons_per_readout: f64,
    pub shot_overhead: f64,
    pub central_line_only: bool,
}

/// Fully resolved, validated configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub nv: NVParams,
    pub decoherence: DecoherenceParams,
    pub budget: PhotonBudget,
    pub seed: u64,
    pub out: PathBuf,
    pub format: Format,
}

impl Default for Settings {
    fn default() -> Self {
        RunConfig::default().resolve().expect("defaults are valid")
    }
}

impl Settings {
    pub fn signal_model(&self, kind: SequenceKind) -> SignalModel {
        SignalModel {
            contrast: self.budget.contrast,
            photons_per_readout: self.budget.photons_per_readout,
            shot_overhead: self.budget.shot_overhead,
            central_line_only: self.budget.central_line_only,
            ..SignalModel::for_kind(kind, &self.decoherence)
        }
    }
}
