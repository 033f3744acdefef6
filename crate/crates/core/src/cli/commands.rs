//! Subcommand bodies. Each returns the files it produces; writing them is
//! left to the caller so the commands stay pure and testable.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::calibration::{
    align_axial_field, fit_polar_pattern, hyperfine_hamiltonian, hyperfine_lines, AlignmentResult, AlignmentScan,
    FitConfig, FitResult, PolarData,
};
use crate::error::{Error, Result};
use crate::io::{to_json_bytes, Format, Table};
use crate::params::{effective_field, ElectricField, MagneticField, NVParams, StrainField};
use crate::protocols::{
    cw_odmr_spectrum, fringe_sweep, point_charge_field, sensitivity_curve, sensitivity_report, simulate_averaged,
    SensitivityReport, SequenceKind, SignalModel,
};
use crate::response::{
    axial_decay_scan_at, delta_omega_perturbative, mixing_kappa, polar_scan, t2star_model, Method,
};

use super::config::Settings;

/// In-memory output file.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputFile {
    pub name: String,
    pub bytes: Vec<u8>,
}

impl OutputFile {
    fn table(stem: &str, table: &Table, format: Format) -> Result<Self> {
        Ok(OutputFile {
            name: format!("{stem}.{}", format.extension()),
            bytes: table.encode(format)?,
        })
    }

    fn json<T: Serialize>(stem: &str, value: &T) -> Result<Self> {
        Ok(OutputFile {
            name: format!("{stem}.json"),
            bytes: to_json_bytes(value)?,
        })
    }
}

/// Field geometry shared by the spectral commands. Angles in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSpec {
    /// G.
    pub b_perp: f64,
    /// G.
    pub b_z: f64,
    pub phi_b: f64,
    /// V/cm.
    pub e_perp: f64,
    /// V/cm.
    pub e_z: f64,
    pub phi_e: f64,
    /// Hz.
    pub sigma_perp_hz: f64,
    /// Hz.
    pub sigma_z_hz: f64,
    pub phi_sigma: f64,
}

impl FieldSpec {
    /// Aligned field of 23.6 G with `d_par E_z = -4.19 kHz`,
    /// `d_perp E_perp = 81.6 kHz`, `phi_E = 32 deg`, `sigma_perp = 0.189 MHz`
    /// at `phi_sigma = 22 deg`.
    pub fn reference(p: &NVParams) -> Self {
        FieldSpec {
            b_perp: 23.6,
            b_z: 0.0,
            phi_b: 0.0,
            e_perp: 81.6e3 / p.d_perp,
            e_z: -4.19e3 / p.d_par,
            phi_e: 32f64.to_radians(),
            sigma_perp_hz: 0.189e6,
            sigma_z_hz: 0.0,
            phi_sigma: 22f64.to_radians(),
        }
    }

    pub fn electric(&self) -> ElectricField {
        ElectricField::new(self.e_z, self.e_perp, self.phi_e)
    }

    pub fn strain(&self, p: &NVParams) -> StrainField {
        StrainField::from_frequency(self.sigma_z_hz, self.sigma_perp_hz, self.phi_sigma, p)
    }

    pub fn magnetic(&self) -> MagneticField {
        MagneticField::new(self.b_z, self.b_perp, self.phi_b)
    }
}

/// Polar pattern over `n_angles` in-plane azimuths, both models.
pub fn cmd_polar(s: &Settings, f: &FieldSpec, n_angles: usize) -> Result<Vec<OutputFile>> {
    let (e, st) = (f.electric(), f.strain(&s.nv));
    let exact = polar_scan(&s.nv, f.b_perp, f.b_z, &e, &st, n_angles, Method::Exact)?;
    let pert = polar_scan(&s.nv, f.b_perp, f.b_z, &e, &st, n_angles, Method::Perturbative)?;
    let mut t = Table::new(&[
        "phi_b_deg",
        "delta_omega_plus_exact_hz",
        "delta_omega_plus_pert_hz",
        "delta_omega_minus_exact_hz",
        "delta_omega_minus_pert_hz",
    ]);
    for (x, q) in exact.iter().zip(&pert) {
        t.push(vec![
            x.phi_b.to_degrees(),
            x.d_omega_plus,
            q.d_omega_plus,
            x.d_omega_minus,
            q.d_omega_minus,
        ]);
    }
    Ok(vec![OutputFile::table("polar", &t, s.format)?])
}

/// Symmetric axial-field grid on `[-b_z_max, b_z_max]`.
pub fn symmetric_grid(b_z_max: f64, n_points: usize) -> Result<Vec<f64>> {
    if n_points < 3 || n_points.is_multiple_of(2) {
        return Err(Error::invalid("n_points", format!("need an odd count >= 3, got {n_points}")));
    }
    if !(b_z_max.is_finite() && b_z_max > 0.0) {
        return Err(Error::invalid("b_z_max", "must be finite and > 0"));
    }
    let half = (n_points / 2) as f64;
    Ok((0..n_points)
        .map(|k| b_z_max * (k as f64 - half) / half)
        .collect())
}

/// Shift versus axial field with the in-plane field held at `f.phi_b`.
pub fn cmd_axial_decay(s: &Settings, f: &FieldSpec, b_z_max: f64, n_points: usize) -> Result<Vec<OutputFile>> {
    let grid = symmetric_grid(b_z_max, n_points)?;
    let (e, st) = (f.electric(), f.strain(&s.nv));
    let exact = axial_decay_scan_at(&s.nv, f.b_perp, f.phi_b, &e, &st, &grid)?;
    let pert = grid
        .iter()
        .map(|&b_z| {
            let b = MagneticField::new(b_z, f.b_perp, f.phi_b);
            Ok(delta_omega_perturbative(&s.nv, &b, &e, &st)?.d_omega_plus)
        })
        .collect::<Result<Vec<f64>>>()?;
    let pert_peak = pert.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut t = Table::new(&[
        "b_z_gauss",
        "delta_omega_exact_hz",
        "delta_omega_pert_hz",
        "normalized_exact_1",
        "normalized_pert_1",
    ]);
    for (x, q) in exact.iter().zip(&pert) {
        let qn = if pert_peak > 0.0 { q / pert_peak } else { 0.0 };
        t.push(vec![x.b_z, x.d_omega_plus, *q, x.normalized, qn]);
    }
    Ok(vec![OutputFile::table("axial_decay", &t, s.format)?])
}

/// Fringe and sensitivity sweep options.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SenseSpec {
    pub kind: SequenceKind,
    /// Free evolution time, s.
    pub tau: f64,
    /// Upper end of the fringe sweep, V/cm; `None` spans two periods.
    pub e_max: Option<f64>,
    pub n_e: usize,
    /// Shots averaged per simulated fringe point.
    pub fringe_shots: u64,
    /// Total measurement times span `[t_min, t_max]` logarithmically, s.
    pub t_min: f64,
    pub t_max: f64,
    pub n_t: usize,
    pub mc_points: usize,
    /// Total time at which the reported `e_sen` is evaluated, s.
    pub report_time: f64,
}

impl SenseSpec {
    pub fn new(kind: SequenceKind) -> Self {
        SenseSpec {
            kind,
            tau: default_tau(kind),
            e_max: None,
            n_e: 201,
            fringe_shots: 1_000_000,
            t_min: 0.1,
            t_max: 100.0,
            n_t: 13,
            mc_points: crate::protocols::DEFAULT_MC_POINTS,
            report_time: 1.0,
        }
    }
}

/// 80 us for echoes, 8 us for free induction.
pub fn default_tau(kind: SequenceKind) -> f64 {
    match kind {
        SequenceKind::Fid => 8e-6,
        SequenceKind::HahnEcho => 80e-6,
    }
}

/// Period of the fringe in `E_perp`, V/cm.
pub fn fringe_period(d_perp: f64, kind: SequenceKind, tau: f64) -> f64 {
    1.0 / (kind.phase_factor() * d_perp * tau)
}

pub fn kind_name(kind: SequenceKind) -> &'static str {
    match kind {
        SequenceKind::Fid => "fid",
        SequenceKind::HahnEcho => "hahn",
    }
}

#[derive(Debug, Serialize)]
struct SenseReport<'a> {
    kind: &'a str,
    fringe_period_v_per_cm: f64,
    model: SignalModel,
    report: SensitivityReport,
    seed: u64,
}

/// Fringe sweep (ideal and sampled), sensitivity curve and a summary report.
pub fn cmd_sense(s: &Settings, spec: &SenseSpec) -> Result<Vec<OutputFile>> {
    let m = s.signal_model(spec.kind);
    let d_perp = s.nv.d_perp;
    let name = kind_name(spec.kind);
    if spec.n_e < 2 || spec.n_t < 2 {
        return Err(Error::invalid("n_e", "sweeps need at least 2 points"));
    }
    if spec.fringe_shots == 0 {
        return Err(Error::invalid("fringe_shots", "must be > 0"));
    }
    let period = fringe_period(d_perp, spec.kind, spec.tau);
    let e_max = spec.e_max.unwrap_or(2.0 * period);
    if !(e_max.is_finite() && e_max > 0.0) {
        return Err(Error::invalid("e_max", "must be finite and > 0"));
    }
    let e_grid: Vec<f64> = (0..spec.n_e)
        .map(|k| e_max * k as f64 / (spec.n_e - 1) as f64)
        .collect();
    let fringe = fringe_sweep(&m, d_perp, spec.kind, spec.tau, &e_grid)?;
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
    let mut ft = Table::new(&["e_perp_v_per_cm", "signal_ideal_1", "signal_sampled_1"]);
    for (e, ideal) in fringe {
        let sampled = simulate_averaged(ideal, &m, spec.fringe_shots, 1, &mut rng)?[0];
        ft.push(vec![e, ideal, sampled]);
    }

    if !(spec.t_min > 0.0 && spec.t_max > spec.t_min) {
        return Err(Error::invalid("t_min", "need 0 < t_min < t_max"));
    }
    let ratio = (spec.t_max / spec.t_min).ln();
    let times: Vec<f64> = (0..spec.n_t)
        .map(|k| spec.t_min * (ratio * k as f64 / (spec.n_t - 1) as f64).exp())
        .collect();
    // Offset keeps the curve's stream independent of the fringe samples.
    let curve = sensitivity_curve(&m, d_perp, spec.kind, spec.tau, &times, spec.mc_points, s.seed.wrapping_add(1))?;
    let mut st = Table::new(&[
        "total_time_s",
        "delta_e_min_mc_v_per_cm",
        "delta_e_min_analytic_v_per_cm",
    ]);
    for p in curve {
        st.push(vec![p.total_time, p.delta_e_min_mc, p.delta_e_min_analytic]);
    }

    let report = SenseReport {
        kind: name,
        fringe_period_v_per_cm: period,
        model: m,
        report: sensitivity_report(&m, d_perp, spec.kind, spec.tau, spec.report_time)?,
        seed: s.seed,
    };
    Ok(vec![
        OutputFile::table(&format!("fringe_{name}"), &ft, s.format)?,
        OutputFile::table(&format!("sensitivity_{name}"), &st, s.format)?,
        OutputFile::json(&format!("sensitivity_{name}_report"), &report)?,
    ])
}

/// `kappa` and `T2*` on `[0, b_z_max]`.
pub fn cmd_t2star(s: &Settings, sigma_perp_hz: f64, n_points: usize) -> Result<Vec<OutputFile>> {
    if n_points < 2 {
        return Err(Error::invalid("n_points", "need at least 2"));
    }
    let b_max = s.decoherence.b_z_max;
    let mut t = Table::new(&["b_z_gauss", "kappa_1", "t2_star_s"]);
    for k in 0..n_points {
        let b_z = if k + 1 == n_points {
            b_max
        } else {
            b_max * k as f64 / (n_points - 1) as f64
        };
        t.push(vec![
            b_z,
            mixing_kappa(&s.nv, b_z, sigma_perp_hz)?,
            t2star_model(&s.decoherence, &s.nv, sigma_perp_hz, b_z)?,
        ]);
    }
    Ok(vec![OutputFile::table("t2star", &t, s.format)?])
}

#[derive(Debug, Serialize)]
struct AlignReport {
    points: usize,
    linewidth_hz: f64,
    #[serde(flatten)]
    result: AlignmentResult,
}

pub fn cmd_align(s: &Settings, scan: &AlignmentScan, linewidth_hz: f64) -> Result<Vec<OutputFile>> {
    let result = align_axial_field(scan, linewidth_hz, &s.nv)?;
    let report = AlignReport {
        points: scan.control.len(),
        linewidth_hz,
        result,
    };
    Ok(vec![OutputFile::json("align", &report)?])
}

#[derive(Debug, Serialize)]
struct FitParameter {
    name: &'static str,
    unit: &'static str,
    value: f64,
    uncertainty: f64,
}

#[derive(Debug, Serialize)]
struct FitReport {
    parameters: Vec<FitParameter>,
    frame_index: u8,
    residual_rms_hz: f64,
    chi2: f64,
    dof: usize,
    converged: bool,
    evaluations: usize,
    sigma_perp_hz: f64,
    b_z_gauss: f64,
    symmetry_note: String,
}

fn fit_report(r: &FitResult, cfg: &FitConfig) -> FitReport {
    let (p, u) = (r.params, r.uncertainties);
    let par = |name, unit, value, uncertainty| FitParameter {
        name,
        unit,
        value,
        uncertainty,
    };
    FitReport {
        parameters: vec![
            par("b_perp", "G", p.b_perp, u.b_perp),
            par("d_par_e_z", "Hz", p.d_par_e_z, u.d_par_e_z),
            par("d_perp_e_perp", "Hz", p.d_perp_e_perp, u.d_perp_e_perp),
            par("phi_e", "deg", p.phi_e.to_degrees(), u.phi_e.to_degrees()),
            par("phi_sigma", "deg", p.phi_sigma.to_degrees(), u.phi_sigma.to_degrees()),
        ],
        frame_index: r.frame_index,
        residual_rms_hz: r.residual_rms,
        chi2: r.chi2,
        dof: r.dof,
        converged: r.converged,
        evaluations: r.evaluations,
        sigma_perp_hz: cfg.sigma_perp_freq,
        b_z_gauss: cfg.b_z,
        symmetry_note: r.symmetry_note.clone(),
    }
}

pub fn cmd_fit(s: &Settings, data: &PolarData, cfg: &FitConfig) -> Result<Vec<OutputFile>> {
    let r = fit_polar_pattern(data, &s.nv, cfg)?;
    Ok(vec![OutputFile::json("fit", &fit_report(&r, cfg))?])
}

#[derive(Debug, Serialize)]
struct ChargeReport {
    charge_e: f64,
    distance_m: f64,
    field_v_per_cm: f64,
}

/// Field of a point charge, rendered for stdout.
pub fn cmd_charge(charge_e: f64, distance_m: f64, format: Format) -> Result<String> {
    let field = point_charge_field(charge_e, distance_m)?;
    match format {
        Format::Csv => Ok(format!("{field:.6e}\n")),
        Format::Json => {
            let bytes = to_json_bytes(&ChargeReport {
                charge_e,
                distance_m,
                field_v_per_cm: field,
            })?;
            Ok(String::from_utf8(bytes).expect("serde_json emits UTF-8"))
        }
    }
}

/// ODMR sweep options. A `None` range pads the outermost lines by
/// `20 * linewidth`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdmrSpec {
    pub linewidth_hz: f64,
    pub contrast: f64,
    pub f_min: Option<f64>,
    pub f_max: Option<f64>,
    pub n_points: usize,
}

impl Default for OdmrSpec {
    fn default() -> Self {
        OdmrSpec {
            linewidth_hz: 0.3e6,
            contrast: 0.3,
            f_min: None,
            f_max: None,
            n_points: 4001,
        }
    }
}

pub fn cmd_odmr(s: &Settings, f: &FieldSpec, spec: &OdmrSpec) -> Result<Vec<OutputFile>> {
    if spec.n_points < 2 {
        return Err(Error::invalid("n_points", "need at least 2"));
    }
    let (b, e, st) = (f.magnetic(), f.electric(), f.strain(&s.nv));
    let sys = hyperfine_hamiltonian(&s.nv, &b, &effective_field(&e, &st), false)?;
    let lines = hyperfine_lines(&sys)?;
    let (lo, hi) = lines
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), l| (lo.min(l.frequency), hi.max(l.frequency)));
    let pad = 20.0 * spec.linewidth_hz;
    let f_min = spec.f_min.unwrap_or(lo - pad);
    let f_max = spec.f_max.unwrap_or(hi + pad);
    if !(f_max > f_min) {
        return Err(Error::invalid("f_max", "frequency range is empty"));
    }
    let grid: Vec<f64> = (0..spec.n_points)
        .map(|k| f_min + (f_max - f_min) * k as f64 / (spec.n_points - 1) as f64)
        .collect();
    let spectrum = cw_odmr_spectrum(&s.nv, &b, &e, &st, spec.linewidth_hz, spec.contrast, &grid)?;
    let mut t = Table::new(&["frequency_hz", "fluorescence_1"]);
    for p in spectrum {
        t.push(vec![p.frequency, p.fluorescence]);
    }
    let mut lt = Table::new(&["frequency_hz", "m_i_1", "m_s_branch_1"]);
    for l in &lines {
        let branch = match l.branch {
            crate::calibration::Branch::Plus => 1.0,
            crate::calibration::Branch::Minus => -1.0,
        };
        lt.push(vec![l.frequency, l.m_i as f64, branch]);
    }
    Ok(vec![
        OutputFile::table("odmr", &t, s.format)?,
        OutputFile::table("odmr_lines", &lt, s.format)?,
    ])
}
