use std::f64::consts::TAU;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};

use super::sequence::SequenceKind;
use super::signal::{sample_std, simulate_averaged, SignalModel};

/// Averaged measurements drawn per grid point of a sensitivity curve.
pub const DEFAULT_MC_POINTS: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SensitivityReport {
    /// Standard deviation of one averaged, normalized signal point.
    pub sigma_sn: f64,
    /// Single-shot standard deviation of the normalized signal.
    pub sigma_shot: f64,
    /// Fringe slope at the operating point, per V/cm.
    pub delta_s: f64,
    /// V/cm.
    pub delta_e_min: f64,
    /// V/cm/sqrt(Hz).
    pub e_sen: f64,
    /// Free evolution time used, s.
    pub tau: f64,
    /// Sensitivity-optimal free evolution time, s.
    pub optimal_tau: f64,
    /// Total measurement time, s.
    pub total_time: f64,
    pub n_shots: u64,
}

/// `dE_min = sigma_sn / dS`, V/cm.
pub fn min_detectable_field(sigma_sn: f64, delta_s: f64) -> Result<f64> {
    if delta_s == 0.0 || !delta_s.is_finite() {
        return Err(Error::invalid(
            "delta_s",
            "zero slope: operating point sits on a fringe extremum",
        ));
    }
    if delta_s < 0.0 {
        return Err(Error::invalid("delta_s", format!("must be > 0, got {delta_s}")));
    }
    Ok(sigma_sn / delta_s)
}

/// Largest fringe slope `|dI/dE_perp|` at free evolution `tau`, per V/cm.
pub fn fringe_slope(m: &SignalModel, d_perp: f64, kind: SequenceKind, tau: f64) -> f64 {
    let k = kind.phase_factor();
    m.effective_contrast() * TAU * d_perp * k * tau * m.envelope(kind.evolution_factor() * tau)
}

/// Duration of one shot including overhead, s.
pub fn shot_time(m: &SignalModel, kind: SequenceKind, tau: f64) -> f64 {
    kind.evolution_factor() * tau + m.shot_overhead
}

/// Free evolution time maximizing `tau exp(-(k_e tau / T)^p)`, by golden
/// section on `[T/100, 5T]`.
pub fn optimal_tau(m: &SignalModel, d_perp: f64, kind: SequenceKind) -> f64 {
    let objective = |tau: f64| fringe_slope(m, d_perp, kind, tau);
    let t = m.t2_or_t2star;
    golden_max(objective, t / 100.0, 5.0 * t, 1e-12 * t)
}

fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Shot-noise-limited report at the steepest point of the fringe, where the
/// normalized single-shot variance is `1 / N`.
pub fn sensitivity_report(
    m: &SignalModel,
    d_perp: f64,
    kind: SequenceKind,
    tau: f64,
    total_time: f64,
) -> Result<SensitivityReport> {
    m.validate()?;
    if !(tau > 0.0 && total_time > 0.0) {
        return Err(Error::invalid("tau", "tau and total time must be > 0"));
    }
    let t_shot = shot_time(m, kind, tau);
    let n_shots = (total_time / t_shot).floor().max(1.0) as u64;
    let sigma_shot = 1.0 / m.photons_per_readout.sqrt();
    // Continuous shot count keeps the analytic limit an exact power law.
    let sigma_sn = sigma_shot * (t_shot / total_time).sqrt();
    let delta_s = fringe_slope(m, d_perp, kind, tau);
    let delta_e_min = min_detectable_field(sigma_sn, delta_s)?;
    Ok(SensitivityReport {
        sigma_sn,
        sigma_shot,
        delta_s,
        delta_e_min,
        e_sen: delta_e_min * total_time.sqrt(),
        tau,
        optimal_tau: optimal_tau(m, d_perp, kind),
        total_time,
        n_shots,
    })
}

/// Photons per shot needed to reach `target_e_sen` V/cm/sqrt(Hz).
pub fn calibrate_photon_budget(
    m: &SignalModel,
    d_perp: f64,
    kind: SequenceKind,
    tau: f64,
    target_e_sen: f64,
) -> Result<f64> {
    if !(target_e_sen > 0.0) {
        return Err(Error::invalid("target_e_sen", "must be > 0"));
    }
    let slope = fringe_slope(m, d_perp, kind, tau);
    Ok(shot_time(m, kind, tau) / (target_e_sen * slope).powi(2))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SensitivityPoint {
    /// Total measurement time, s.
    pub total_time: f64,
    /// Monte-Carlo minimum detectable field, V/cm.
    pub delta_e_min_mc: f64,
    /// Shot-noise limit, V/cm.
    pub delta_e_min_analytic: f64,
}

/// Minimum detectable field versus total measurement time. Each Monte-Carlo
/// value is the spread of `n_points` simulated averaged points at the
/// operating point divided by the fringe slope.
pub fn sensitivity_curve(
    m: &SignalModel,
    d_perp: f64,
    kind: SequenceKind,
    tau: f64,
    total_times: &[f64],
    n_points: usize,
    seed: u64,
) -> Result<Vec<SensitivityPoint>> {
    m.validate()?;
    let (lo, hi) = total_times
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), &t| (lo.min(t), hi.max(t)));
    if !(lo > 0.0) || hi / lo < 100.0 * (1.0 - 1e-12) {
        return Err(Error::invalid(
            "total_times",
            format!("grid must be positive and span >= 2 decades, got [{lo}, {hi}]"),
        ));
    }
    if n_points < 2 {
        return Err(Error::invalid("n_points", "need at least 2"));
    }
    let slope = fringe_slope(m, d_perp, kind, tau);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    total_times
        .iter()
        .map(|&t| {
            let report = sensitivity_report(m, d_perp, kind, tau, t)?;
            let draws = simulate_averaged(0.0, m, report.n_shots, n_points, &mut rng)?;
            Ok(SensitivityPoint {
                total_time: t,
                delta_e_min_mc: min_detectable_field(sample_std(&draws), slope)?,
                delta_e_min_analytic: report.delta_e_min,
            })
        })
        .collect()
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::response::DecoherenceParams;

    fn model(kind: SequenceKind) -> SignalModel {
        SignalModel::for_kind(kind, &DecoherenceParams::default())
    }

    #[test]
    fn min_field_arithmetic() {
        assert_eq!(min_detectable_field(1.0, 0.1).unwrap(), 10.0);
        assert_eq!(min_detectable_field(1.0, 0.2).unwrap(), 5.0);
        assert!(min_detectable_field(1.0, 0.0).is_err());
    }

    #[test]
    fn optimal_tau_calculus() {
        let m = model(SequenceKind::Fid);
        let t = optimal_tau(&m, 17.0, SequenceKind::Fid);
        assert!((t - m.t2_or_t2star).abs() <= 1e-6 * m.t2_or_t2star);
        let m2 = SignalModel {
            envelope_exponent: 2.0,
            ..m
        };
        let t = optimal_tau(&m2, 17.0, SequenceKind::Fid);
        let oracle = m.t2_or_t2star / 2f64.sqrt();
        assert!((t - oracle).abs() <= 1e-6 * oracle);
        // Echo: evolution 2 tau against T2.
        let h = model(SequenceKind::HahnEcho);
        let t = optimal_tau(&h, 17.0, SequenceKind::HahnEcho);
        assert!((t - h.t2_or_t2star / 2.0).abs() <= 1e-6 * h.t2_or_t2star);
    }

    #[test]
    fn default_budget_lands_near_reference_points() {
        let ac = sensitivity_report(&model(SequenceKind::HahnEcho), 17.0, SequenceKind::HahnEcho, 80e-6, 1.0).unwrap();
        let dc = sensitivity_report(&model(SequenceKind::Fid), 17.0, SequenceKind::Fid, 8e-6, 1.0).unwrap();
        assert!(ac.e_sen > 142.6 / 3.0 && ac.e_sen < 142.6 * 3.0, "{}", ac.e_sen);
        assert!(dc.e_sen > 631.1 / 3.0 && dc.e_sen < 631.1 * 3.0, "{}", dc.e_sen);
        assert!((ac.delta_e_min - ac.sigma_sn / ac.delta_s).abs() == 0.0);
    }

    #[test]
    fn calibrated_budget_reproduces_target() {
        let kind = SequenceKind::HahnEcho;
        let m = model(kind);
        let n = calibrate_photon_budget(&m, 17.0, kind, 80e-6, 142.6).unwrap();
        let m = SignalModel {
            photons_per_readout: n,
            ..m
        };
        let r = sensitivity_report(&m, 17.0, kind, 80e-6, 100.0).unwrap();
        assert!((r.delta_e_min - 14.26).abs() / 14.26 < 1e-3, "{}", r.delta_e_min);
    }

    #[test]
    fn curve_scaling_and_determinism() {
        let kind = SequenceKind::HahnEcho;
        let m = model(kind);
        let grid: Vec<f64> = (0..9).map(|k| 10f64.powf(-1.0 + 0.25 * k as f64)).collect();
        let c = sensitivity_curve(&m, 17.0, kind, 80e-6, &grid, DEFAULT_MC_POINTS, 11).unwrap();
        let t: Vec<f64> = c.iter().map(|p| p.total_time).collect();
        let mc: Vec<f64> = c.iter().map(|p| p.delta_e_min_mc).collect();
        let an: Vec<f64> = c.iter().map(|p| p.delta_e_min_analytic).collect();
        assert!((log_log_slope(&t, &an) + 0.5).abs() < 1e-12);
        assert!((log_log_slope(&t, &mc) + 0.5).abs() < 0.02);
        let again = sensitivity_curve(&m, 17.0, kind, 80e-6, &grid, DEFAULT_MC_POINTS, 11).unwrap();
        assert_eq!(c, again);
        assert!(sensitivity_curve(&m, 17.0, kind, 80e-6, &[1.0, 10.0], 100, 1).is_err());
    }
}
