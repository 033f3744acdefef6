//! Photon-shot-noise limited sensitivity: seeded Monte-Carlo minimum
//! detectable field against the analytic limit, and E_sen for both
//! sequences under the default photon budget.
//!
//! cargo run --example shot_noise_sensitivity

use nv_electrometry::protocols::{
    log_log_slope, sensitivity_curve, sensitivity_report, SequenceKind, SignalModel, DEFAULT_MC_POINTS,
};
use nv_electrometry::response::DecoherenceParams;

fn main() -> nv_electrometry::Result<()> {
    let d = DecoherenceParams::default();
    let d_perp = 17.0;
    for (kind, tau) in [(SequenceKind::HahnEcho, 80e-6), (SequenceKind::Fid, 8e-6)] {
        let m = SignalModel::for_kind(kind, &d);
        let report = sensitivity_report(&m, d_perp, kind, tau, 1.0)?;
        println!(
            "{kind:?}: tau = {:.0} us (optimum {:.0} us), E_sen = {:.1} V/cm/sqrt(Hz)",
            tau * 1e6,
            report.optimal_tau * 1e6,
            report.e_sen
        );
        let times: Vec<f64> = (0..=8).map(|k| 0.1 * 10f64.powf(k as f64 / 4.0)).collect();
        let curve = sensitivity_curve(&m, d_perp, kind, tau, &times, DEFAULT_MC_POINTS, 42)?;
        println!("{:>10} {:>14} {:>14}", "T [s]", "MC [V/cm]", "limit [V/cm]");
        for c in &curve {
            println!("{:>10.3} {:>14.3} {:>14.3}", c.total_time, c.delta_e_min_mc, c.delta_e_min_analytic);
        }
        let mc: Vec<f64> = curve.iter().map(|c| c.delta_e_min_mc).collect();
        println!("log-log slope: {:.3}\n", log_log_slope(&times, &mc));
    }
    Ok(())
}
