use std::f64::consts::TAU;

use crate::error::{Error, Result};

use super::sequence::{PiecewiseConstant, PulseSequence, SequenceKind};

/// Default step count of the trapezoidal integrator.
pub const DEFAULT_STEPS: usize = 10_000;

/// A transition detuning `d_omega(t)` in Hz over sequence time.
pub trait DetuningProfile {
    /// Interval on which the profile is defined, s.
    fn domain(&self) -> (f64, f64);

    /// `int_t0^t1 d_omega(t) dt`, cycles.
    fn integral(&self, t0: f64, t1: f64) -> f64;
}

/// Piecewise-constant detuning; integrals are exact sums.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseDetuning(pub PiecewiseConstant);

impl DetuningProfile for PiecewiseDetuning {
    fn domain(&self) -> (f64, f64) {
        self.0.domain()
    }

    fn integral(&self, t0: f64, t1: f64) -> f64 {
        self.0.integral(t0, t1)
    }
}

/// Arbitrary detuning sampled on a uniform grid, trapezoidal rule.
pub struct SampledDetuning<F: Fn(f64) -> f64> {
    pub f: F,
    pub start: f64,
    pub end: f64,
    pub steps: usize,
}

impl<F: Fn(f64) -> f64> SampledDetuning<F> {
    pub fn new(f: F, start: f64, end: f64) -> Self {
        SampledDetuning {
            f,
            start,
            end,
            steps: DEFAULT_STEPS,
        }
    }
}

impl<F: Fn(f64) -> f64> DetuningProfile for SampledDetuning<F> {
    fn domain(&self) -> (f64, f64) {
        (self.start, self.end)
    }

    fn integral(&self, t0: f64, t1: f64) -> f64 {
        let n = self.steps.max(1);
        let h = (t1 - t0) / n as f64;
        let inner: f64 = (1..n).map(|k| (self.f)(t0 + k as f64 * h)).sum();
        h * (0.5 * ((self.f)(t0) + (self.f)(t1)) + inner)
    }
}

fn check(seq: &PulseSequence, want: SequenceKind, profile: &dyn DetuningProfile) -> Result<()> {
    if seq.kind != want {
        return Err(Error::invalid(
            "kind",
            format!("expected {want:?} sequence, got {:?}", seq.kind),
        ));
    }
    let (a, b) = profile.domain();
    let end = seq.duration();
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

/// Free-induction phase `2 pi int_0^tau d_omega dt`, rad.
pub fn phase_fid(seq: &PulseSequence, profile: &dyn DetuningProfile) -> Result<f64> {
    check(seq, SequenceKind::Fid, profile)?;
    Ok(TAU * profile.integral(0.0, seq.tau))
}

/// Echo phase `2 pi (int_0^tau - int_tau^2tau) d_omega dt`, rad.
pub fn phase_hahn(seq: &PulseSequence, profile: &dyn DetuningProfile) -> Result<f64> {
    check(seq, SequenceKind::HahnEcho, profile)?;
    Ok(TAU * (profile.integral(0.0, seq.tau) - profile.integral(seq.tau, 2.0 * seq.tau)))
}

/// Phase of either sequence kind for the sequence's own waveform.
pub fn sequence_phase(seq: &PulseSequence, d_perp: f64) -> Result<f64> {
    let profile = seq.detuning(d_perp);
    match seq.kind {
        SequenceKind::Fid => phase_fid(seq, &profile),
        SequenceKind::HahnEcho => phase_hahn(seq, &profile),
    }
}
