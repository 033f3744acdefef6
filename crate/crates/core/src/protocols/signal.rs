use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::response::DecoherenceParams;

use super::sequence::{PulseSequence, SequenceKind};
use super::phase::sequence_phase;

/// Optical readout and envelope model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignalModel {
    /// ODMR contrast `A` of the full resonance.
    pub contrast: f64,
    /// Mean detected photons per readout shot.
    pub photons_per_readout: f64,
    pub envelope_exponent: f64,
    /// `T2` for echoes or `T2*` for free induction, s.
    pub t2_or_t2star: f64,
    /// Only the `m_I = 0` hyperfine line is driven, leaving a third of `A`.
    pub central_line_only: bool,
    /// Dead time per shot (initialization, pulses, readout), s.
    pub shot_overhead: f64,
}

impl SignalModel {
    /// Default photon budget with the coherence time matching `kind`.
    pub fn for_kind(kind: SequenceKind, d: &DecoherenceParams) -> Self {
        SignalModel {
            contrast: 0.3,
            photons_per_readout: 0.01,
            envelope_exponent: d.envelope_exponent,
            t2_or_t2star: match kind {
                SequenceKind::Fid => d.t2_star_perp,
                SequenceKind::HahnEcho => d.t2,
            },
            central_line_only: true,
            shot_overhead: 5e-6,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.contrast > 0.0 && self.contrast <= 1.0) {
            return Err(Error::invalid("contrast", format!("must lie in (0, 1], got {}", self.contrast)));
        }
        for (name, v) in [
            ("photons_per_readout", self.photons_per_readout),
            ("envelope_exponent", self.envelope_exponent),
            ("t2_or_t2star", self.t2_or_t2star),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(name, format!("must be finite and > 0, got {v}")));
            }
        }
        if !(self.shot_overhead.is_finite() && self.shot_overhead >= 0.0) {
            return Err(Error::invalid("shot_overhead", "must be finite and >= 0"));
        }
        Ok(())
    }

    /// Amplitude `A` of the observable fringe.
    pub fn effective_contrast(&self) -> f64 {
        if self.central_line_only {
            self.contrast / 3.0
        } else {
            self.contrast
        }
    }

    /// `exp(-(t / T)^p)`.
    pub fn envelope(&self, total_evolution: f64) -> f64 {
        (-(total_evolution / self.t2_or_t2star).powf(self.envelope_exponent)).exp()
    }
}

/// `dI = A exp(-(t/T)^p) cos(phi)`.
pub fn signal_intensity(phi: f64, m: &SignalModel, total_evolution: f64) -> f64 {
    m.effective_contrast() * m.envelope(total_evolution) * phi.cos()
}

/// Ideal fringe `dI(E_perp)` for a matched drive at fixed `tau`.
pub fn fringe_sweep(
    m: &SignalModel,
    d_perp: f64,
    kind: SequenceKind,
    tau: f64,
    e_grid: &[f64],
) -> Result<Vec<(f64, f64)>> {
    e_grid
        .iter()
        .map(|&e| {
            let seq = match kind {
                SequenceKind::Fid => PulseSequence::fid_constant(tau, e)?,
                SequenceKind::HahnEcho => PulseSequence::hahn_matched(tau, e)?,
            };
            let phi = sequence_phase(&seq, d_perp)?;
            Ok((e, signal_intensity(phi, m, seq.duration())))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReadoutStats {
    pub counts: Vec<u64>,
    pub mean: f64,
    pub std: f64,
    /// Mean of `counts / N - 1`.
    pub normalized_mean: f64,
    /// Standard deviation of `counts / N - 1`.
    pub normalized_std: f64,
}

fn poisson(lambda: f64) -> Result<Poisson<f64>> {
    Poisson::new(lambda).map_err(|e| Error::invalid("photons_per_readout", format!("{e} (lambda = {lambda})")))
}

fn mean_std(xs: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let n = xs.clone().count() as f64;
    let mean = xs.clone().sum::<f64>() / n;
    let var = if n > 1.0 {
        xs.map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    (mean, var.sqrt())
}

/// Single-shot photon counts: Poisson with mean `N (1 + dI)`.
pub fn simulate_readout(ideal_signal: f64, m: &SignalModel, n_repeats: usize, seed: u64) -> Result<ReadoutStats> {
    if n_repeats == 0 {
        return Err(Error::invalid("n_repeats", "must be > 0"));
    }
    let n = m.photons_per_readout;
    let dist = poisson(n * (1.0 + ideal_signal))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let counts: Vec<u64> = (0..n_repeats).map(|_| dist.sample(&mut rng) as u64).collect();
    let (mean, std) = mean_std(counts.iter().map(|&c| c as f64));
    Ok(ReadoutStats {
        counts,
        mean,
        std,
        normalized_mean: mean / n - 1.0,
        normalized_std: std / n,
    })
}

/// `n_points` averaged measurements of `n_shots` shots each, normalized to
/// `counts / (n_shots N) - 1`. Sums of Poisson draws are drawn directly.
pub fn simulate_averaged(
    ideal_signal: f64,
    m: &SignalModel,
    n_shots: u64,
    n_points: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<f64>> {
    if n_shots == 0 {
        return Err(Error::invalid("n_shots", "must be > 0"));
    }
    let lambda = n_shots as f64 * m.photons_per_readout;
    let dist = poisson(lambda * (1.0 + ideal_signal))?;
    Ok((0..n_points).map(|_| dist.sample(rng) / lambda - 1.0).collect())
}

pub(crate) fn sample_std(xs: &[f64]) -> f64 {
    mean_std(xs.iter().copied()).1
}
