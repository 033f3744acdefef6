//! Command-line front end.
//!
//! Exit codes: 0 success, 2 usage or invalid parameter, 3 physics-regime or
//! degenerate-data error, 4 I/O or parse error.

mod commands;
mod config;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use commands::{
    cmd_align, cmd_axial_decay, cmd_charge, cmd_fit, cmd_odmr, cmd_polar, cmd_sense, cmd_t2star, default_tau,
    fringe_period, kind_name, symmetric_grid, FieldSpec, OdmrSpec, OutputFile, SenseSpec,
};
pub use config::{PhotonBudget, RunConfig, Settings, DEFAULT_SEED};

use crate::calibration::FitConfig;
use crate::error::{Error, Result};
use crate::io::{read_alignment_scan, read_polar_data, write_atomic, Format};
use crate::protocols::SequenceKind;

#[derive(Debug, Parser)]
#[command(name = "nv-electrometry", version, about = "NV-centre electric field sensing toolkit")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// JSON file with configuration overrides.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Monte-Carlo seed.
    #[arg(long, global = true, value_name = "N")]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Encoding of tabular output.
    #[arg(long, global = true, value_enum)]
    pub format: Option<FormatArg>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Fid,
    Hahn,
}

impl From<KindArg> for SequenceKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Fid => SequenceKind::Fid,
            KindArg::Hahn => SequenceKind::HahnEcho,
        }
    }
}

/// Field geometry; angles in degrees. No electric field is applied unless
/// given.
#[derive(Debug, Clone, Args)]
pub struct FieldArgs {
    /// Non-axial magnetic field, G.
    #[arg(long, default_value_t = 23.6)]
    pub b_perp: f64,
    /// Axial magnetic field, G.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub b_z: f64,
    /// Azimuth of the non-axial magnetic field, deg.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub phi_b: f64,
    /// Non-axial electric field, V/cm.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub e_perp: f64,
    /// Axial electric field, V/cm.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub e_z: f64,
    /// Azimuth of the electric field, deg.
    #[arg(long, default_value_t = 32.0, allow_hyphen_values = true)]
    pub phi_e: f64,
    /// Non-axial strain in frequency units, Hz.
    #[arg(long, default_value_t = 0.189e6)]
    pub sigma_perp_hz: f64,
    /// Axial strain in frequency units, Hz.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub sigma_z_hz: f64,
    /// Azimuth of the strain, deg.
    #[arg(long, default_value_t = 22.0, allow_hyphen_values = true)]
    pub phi_sigma: f64,
}

impl FieldArgs {
    pub fn spec(&self) -> FieldSpec {
        FieldSpec {
            b_perp: self.b_perp,
            b_z: self.b_z,
            phi_b: self.phi_b.to_radians(),
            e_perp: self.e_perp,
            e_z: self.e_z,
            phi_e: self.phi_e.to_radians(),
            sigma_perp_hz: self.sigma_perp_hz,
            sigma_z_hz: self.sigma_z_hz,
            phi_sigma: self.phi_sigma.to_radians(),
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Transition shift versus the azimuth of the non-axial magnetic field.
    Polar {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, default_value_t = 360)]
        n_angles: usize,
    },
    /// Transition shift versus the axial magnetic field.
    AxialDecay {
        #[command(flatten)]
        field: FieldArgs,
        /// Grid spans [-b_z_span, b_z_span], G.
        #[arg(long, default_value_t = 10.0)]
        b_z_span: f64,
        /// Odd number of grid points.
        #[arg(long, default_value_t = 201)]
        n_points: usize,
    },
    /// Fringe sweep and shot-noise sensitivity for one pulse sequence.
    Sense {
        #[arg(long, value_enum, default_value_t = KindArg::Hahn)]
        kind: KindArg,
        /// Free evolution time, s (default 80e-6 for hahn, 8e-6 for fid).
        #[arg(long)]
        tau: Option<f64>,
        /// End of the fringe sweep, V/cm (default two fringe periods).
        #[arg(long)]
        e_max: Option<f64>,
        #[arg(long, default_value_t = 201)]
        n_e: usize,
        /// Shots averaged per sampled fringe point.
        #[arg(long, default_value_t = 1_000_000)]
        fringe_shots: u64,
        /// Shortest total measurement time, s.
        #[arg(long, default_value_t = 0.1)]
        t_min: f64,
        /// Longest total measurement time, s.
        #[arg(long, default_value_t = 100.0)]
        t_max: f64,
        #[arg(long, default_value_t = 13)]
        n_t: usize,
        /// Simulated averaged points per total time.
        #[arg(long, default_value_t = crate::protocols::DEFAULT_MC_POINTS)]
        mc_points: usize,
    },
    /// Strain/Zeeman mixing and the resulting T2* versus axial field.
    T2star {
        #[arg(long, default_value_t = 0.189e6)]
        sigma_perp_hz: f64,
        #[arg(long, default_value_t = 201)]
        n_points: usize,
    },
    /// Locate the zero of the axial field from an outer-line splitting scan.
    Align {
        /// CSV with columns control, splitting_hz.
        #[arg(long, value_name = "FILE")]
        scan: PathBuf,
        /// Resonance linewidth, Hz.
        #[arg(long, default_value_t = 0.1e6)]
        linewidth_hz: f64,
    },
    /// Fit field parameters to a measured polar pattern.
    Fit {
        /// CSV with columns phi_b_deg, delta_omega_hz[, sigma_hz].
        #[arg(long, value_name = "FILE")]
        data: PathBuf,
        /// Known non-axial strain, Hz.
        #[arg(long, default_value_t = 0.189e6)]
        sigma_perp_hz: f64,
        /// Axial field during the measurement, G.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        b_z: f64,
        #[arg(long, default_value_t = 8)]
        n_starts: usize,
    },
    /// Field of a point charge at the NV.
    Charge {
        /// Charge in units of the elementary charge.
        #[arg(allow_hyphen_values = true)]
        q: f64,
        /// Distance, m.
        r: f64,
    },
    /// Hyperfine-resolved CW ODMR spectrum.
    Odmr {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, default_value_t = 0.3e6)]
        linewidth_hz: f64,
        #[arg(long, default_value_t = 0.3)]
        contrast: f64,
        #[arg(long)]
        f_min: Option<f64>,
        #[arg(long)]
        f_max: Option<f64>,
        #[arg(long, default_value_t = 4001)]
        n_points: usize,
    },
}

impl Cli {
    /// Merges the config file (if any) with flag overrides.
    pub fn settings(&self) -> Result<Settings> {
        let file = match &self.global.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        let flags = RunConfig {
            seed: self.global.seed,
            out: self.global.out.clone(),
            format: self.global.format.map(Format::from),
            ..RunConfig::default()
        };
        flags.or(file).resolve()
    }
}

/// Executes a parsed command, writing files under the output directory and
/// their paths (or the charge value) to `stdout`.
pub fn execute(cli: &Cli, stdout: &mut dyn Write) -> Result<()> {
    let s = cli.settings()?;
    let files = match &cli.command {
        Command::Polar { field, n_angles } => cmd_polar(&s, &field.spec(), *n_angles)?,
        Command::AxialDecay {
            field,
            b_z_span,
            n_points,
        } => cmd_axial_decay(&s, &field.spec(), *b_z_span, *n_points)?,
        Command::Sense {
            kind,
            tau,
            e_max,
            n_e,
            fringe_shots,
            t_min,
            t_max,
            n_t,
            mc_points,
        } => {
            let kind = SequenceKind::from(*kind);
            let spec = SenseSpec {
                tau: tau.unwrap_or(default_tau(kind)),
                e_max: *e_max,
                n_e: *n_e,
                fringe_shots: *fringe_shots,
                t_min: *t_min,
                t_max: *t_max,
                n_t: *n_t,
                mc_points: *mc_points,
                ..SenseSpec::new(kind)
            };
            cmd_sense(&s, &spec)?
        }
        Command::T2star {
            sigma_perp_hz,
            n_points,
        } => cmd_t2star(&s, *sigma_perp_hz, *n_points)?,
        Command::Align { scan, linewidth_hz } => cmd_align(&s, &read_alignment_scan(scan)?, *linewidth_hz)?,
        Command::Fit {
            data,
            sigma_perp_hz,
            b_z,
            n_starts,
        } => {
            let cfg = FitConfig {
                sigma_perp_freq: *sigma_perp_hz,
                b_z: *b_z,
                n_starts: *n_starts,
                ..FitConfig::default()
            };
            cmd_fit(&s, &read_polar_data(data)?, &cfg)?
        }
        Command::Charge { q, r } => {
            let text = cmd_charge(*q, *r, s.format)?;
            return stdout
                .write_all(text.as_bytes())
                .map_err(|e| Error::io("<stdout>", e));
        }
        Command::Odmr {
            field,
            linewidth_hz,
            contrast,
            f_min,
            f_max,
            n_points,
        } => {
            let spec = OdmrSpec {
                linewidth_hz: *linewidth_hz,
                contrast: *contrast,
                f_min: *f_min,
                f_max: *f_max,
                n_points: *n_points,
            };
            cmd_odmr(&s, &field.spec(), &spec)?
        }
    };
    for f in files {
        let path = s.out.join(&f.name);
        write_atomic(&path, &f.bytes)?;
        writeln!(stdout, "{}", path.display()).map_err(|e| Error::io("<stdout>", e))?;
    }
    Ok(())
}

/// Parses `args`, runs the command and returns the process exit code.
/// Diagnostics go to stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match execute(&cli, &mut lock) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn bad_flag_is_usage_error() {
        assert_eq!(run(["nv-electrometry", "polar", "--bogus"]), 2);
        assert_eq!(run(["nv-electrometry", "sense", "--kind", "ramsey"]), 2);
    }

    #[test]
    fn negative_values_parse() {
        let cli = Cli::try_parse_from(["x", "polar", "--b-z", "-0.5", "--e-z", "-1e4"]).unwrap();
        match cli.command {
            Command::Polar { field, .. } => {
                assert_eq!(field.b_z, -0.5);
                assert_eq!(field.e_z, -1e4);
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn degrees_converted() {
        let cli = Cli::try_parse_from(["x", "polar", "--phi-e", "90"]).unwrap();
        assert!(cli.settings().is_ok());
        match cli.command {
            Command::Polar { field, .. } => {
                assert!((field.spec().phi_e - std::f64::consts::FRAC_PI_2).abs() < 1e-15)
            }
            _ => unreachable!(),
        }
    }
}
