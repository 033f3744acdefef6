use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::phase::PiecewiseDetuning;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SequenceKind {
    Fid,
    HahnEcho,
}

impl SequenceKind {
    /// Total free evolution in units of `tau`.
    pub fn evolution_factor(self) -> f64 {
        match self {
            SequenceKind::Fid => 1.0,
            SequenceKind::HahnEcho => 2.0,
        }
    }

    /// Phase gain relative to an FID of the same `tau` for a matched signal.
    pub fn phase_factor(self) -> f64 {
        self.evolution_factor()
    }
}

/// Piecewise-constant non-axial field `E_perp(t)`, V/cm.
///
/// `values[k]` holds on `[breakpoints[k], breakpoints[k + 1])`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseConstant {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

impl PiecewiseConstant {
    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if breakpoints.len() != values.len() + 1 || values.is_empty() {
            return Err(Error::invalid(
                "waveform",
                format!(
                    "need n values and n + 1 breakpoints, got {} and {}",
                    values.len(),
                    breakpoints.len()
                ),
            ));
        }
        if breakpoints.iter().chain(&values).any(|v| !v.is_finite()) {
            return Err(Error::invalid("waveform", "non-finite entry"));
        }
        if breakpoints.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid("waveform", "breakpoints must be strictly increasing"));
        }
        Ok(PiecewiseConstant { breakpoints, values })
    }

    pub fn constant(value: f64, start: f64, end: f64) -> Result<Self> {
        PiecewiseConstant::new(vec![start, end], vec![value])
    }

    /// Square wave starting at `start` with `+amplitude` on the first half
    /// period, alternating sign for `n_halves` half periods.
    pub fn square_wave(amplitude: f64, half_period: f64, start: f64, n_halves: usize) -> Result<Self> {
        let breakpoints = (0..=n_halves).map(|k| start + k as f64 * half_period).collect();
        let values = (0..n_halves)
            .map(|k| if k % 2 == 0 { amplitude } else { -amplitude })
            .collect();
        PiecewiseConstant::new(breakpoints, values)
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.breakpoints[0], self.breakpoints[self.breakpoints.len() - 1])
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value_at(&self, t: f64) -> Option<f64> {
        let (a, b) = self.domain();
        if t < a || t > b {
            return None;
        }
        let k = self.breakpoints.partition_point(|&x| x <= t);
        Some(self.values[k.saturating_sub(1).min(self.values.len() - 1)])
    }

    /// Exact `int_t0^t1 E(t) dt`, V s/cm.
    pub fn integral(&self, t0: f64, t1: f64) -> f64 {
        self.breakpoints
            .windows(2)
            .zip(&self.values)
            .map(|(w, v)| {
                let lo = w[0].max(t0);
                let hi = w[1].min(t1);
                if hi > lo {
                    v * (hi - lo)
                } else {
                    0.0
                }
            })
            .sum()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        PiecewiseConstant {
            breakpoints: self.breakpoints.clone(),
            values: self.values.iter().map(|v| v * factor).collect(),
        }
    }

    pub fn shifted(&self, dt: f64) -> Self {
        PiecewiseConstant {
            breakpoints: self.breakpoints.iter().map(|t| t + dt).collect(),
            values: self.values.clone(),
        }
    }
}

/// Pulse schedule with its electric-field drive.
///
/// The field seen at sequence time `t` (0 = first pi/2 pulse) is
/// `e_waveform(t - phase_offset)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PulseSequence {
    pub kind: SequenceKind,
    /// Free evolution time per arm, s.
    pub tau: f64,
    pub e_waveform: PiecewiseConstant,
    /// Delay of the waveform relative to the first pi/2 pulse, s.
    pub phase_offset: f64,
}

impl PulseSequence {
    pub fn new(kind: SequenceKind, tau: f64, e_waveform: PiecewiseConstant, phase_offset: f64) -> Result<Self> {
        if !(tau.is_finite() && tau > 0.0) {
            return Err(Error::invalid("tau", format!("must be finite and > 0, got {tau}")));
        }
        if !phase_offset.is_finite() {
            return Err(Error::invalid("phase_offset", "must be finite"));
        }
        let seq = PulseSequence {
            kind,
            tau,
            e_waveform,
            phase_offset,
        };
        seq.check_domain()?;
        Ok(seq)
    }

    /// Constant field over the FID window.
    pub fn fid_constant(tau: f64, e_perp: f64) -> Result<Self> {
        PulseSequence::new(SequenceKind::Fid, tau, PiecewiseConstant::constant(e_perp, 0.0, tau)?, 0.0)
    }

    /// Square wave whose sign flip coincides with the pi pulse.
    pub fn hahn_matched(tau: f64, e_perp: f64) -> Result<Self> {
        PulseSequence::new(
            SequenceKind::HahnEcho,
            tau,
            PiecewiseConstant::square_wave(e_perp, tau, 0.0, 2)?,
            0.0,
        )
    }

    /// End of the sequence window, s.
    pub fn duration(&self) -> f64 {
        self.kind.evolution_factor() * self.tau
    }

    pub fn check_domain(&self) -> Result<()> {
        let (a, b) = self.e_waveform.shifted(self.phase_offset).domain();
        let end = self.duration();
        let slack = 1e-12 * end;
        if a > slack || b < end - slack {
            return Err(Error::WaveformDomain {
                start: 0.0,
                end,
                defined_start: a,
                defined_end: b,
            });
        }
        Ok(())
    }

    /// Detuning profile `d_omega(t) = d_perp E_perp(t)` in sequence time.
    pub fn detuning(&self, d_perp: f64) -> PiecewiseDetuning {
        PiecewiseDetuning(self.e_waveform.shifted(self.phase_offset).scaled(d_perp))
    }
}
