//! Free-induction and Hahn-echo fringes versus a non-axial electric field.
//! The echo refocuses static fields and doubles the response to a
//! phase-matched square wave.
//!
//! cargo run --example echo_fringes [waveform.csv]
//!
//! The optional CSV (columns `time_s,e_perp_v_per_cm`) drives a Hahn echo of
//! half its duration.

use std::f64::consts::TAU;

use nv_electrometry::io::read_waveform;
use nv_electrometry::protocols::{
    fringe_sweep, sequence_phase, PiecewiseConstant, PulseSequence, SequenceKind, SignalModel,
};
use nv_electrometry::response::DecoherenceParams;

fn main() -> nv_electrometry::Result<()> {
    let d_perp = 17.0;
    let tau = 80e-6;
    let d = DecoherenceParams::default();
    let grid: Vec<f64> = (0..=16).map(|k| 50.0 * k as f64).collect();
    let hahn = fringe_sweep(&SignalModel::for_kind(SequenceKind::HahnEcho, &d), d_perp, SequenceKind::HahnEcho, tau, &grid)?;
    let fid = fringe_sweep(&SignalModel::for_kind(SequenceKind::Fid, &d), d_perp, SequenceKind::Fid, 8e-6, &grid)?;
    println!("{:>10} {:>12} {:>12}", "E [V/cm]", "Hahn 80us", "FID 8us");
    for ((e, h), (_, f)) in hahn.iter().zip(&fid) {
        println!("{e:>10.0} {h:>12.5} {f:>12.5}");
    }
    println!("Hahn fringe period: {:.1} V/cm", 1.0 / (2.0 * d_perp * tau));

    let static_drive = PulseSequence::new(
        SequenceKind::HahnEcho,
        tau,
        PiecewiseConstant::constant(500.0, 0.0, 2.0 * tau)?,
        0.0,
    )?;
    println!("static 500 V/cm under an echo: phase {}", sequence_phase(&static_drive, d_perp)?);

    if let Some(path) = std::env::args().nth(1) {
        let w = read_waveform(path.as_ref())?;
        let (start, end) = w.domain();
        let seq = PulseSequence::new(SequenceKind::HahnEcho, 0.5 * (end - start), w.shifted(-start), 0.0)?;
        let phi = sequence_phase(&seq, d_perp)?;
        println!("{path}: echo phase {phi:.6} rad ({:.4} turns)", phi / TAU);
    }
    Ok(())
}
