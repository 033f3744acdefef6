mod common;

use std::time::Instant;

use common::*;

fn ok(dir: &std::path::Path, args: &[&str]) -> std::process::Output {
    let out = run_in(dir, args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    out
}

fn table(dir: &std::path::Path, name: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    read_table(&std::fs::read(dir.join(name)).unwrap())
}

#[test]
fn polar_reference_extrema() {
    let dir = tempfile::tempdir().unwrap();
    let out = ok(dir.path(), &["polar", "--e-perp", E_PERP_REF, "--e-z", E_Z_REF]);
    assert!(String::from_utf8_lossy(&out.stdout).contains("polar.csv"));
    let (h, rows) = table(dir.path(), "polar.csv");
    assert_eq!(rows.len(), 360);
    assert_eq!(
        h,
        [
            "phi_b_deg",
            "delta_omega_plus_exact_hz",
            "delta_omega_plus_pert_hz",
            "delta_omega_minus_exact_hz",
            "delta_omega_minus_pert_hz"
        ]
    );
    // Oracle: extremities d_par E_z +- d_perp E_perp.
    let (hi, lo) = (-4.19e3 + 81.6e3, -4.19e3 - 81.6e3);
    for name in ["delta_omega_plus_exact_hz", "delta_omega_plus_pert_hz"] {
        let c = column(&h, &rows, name);
        let max = c.iter().cloned().fold(f64::MIN, f64::max);
        let min = c.iter().cloned().fold(f64::MAX, f64::min);
        assert!((max - hi).abs() <= 0.02 * hi.abs(), "{name} max {max}");
        assert!((min - lo).abs() <= 0.02 * lo.abs(), "{name} min {min}");
    }
}

#[test]
fn polar_without_electric_field_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["polar", "--e-perp", "0"]);
    let (h, rows) = table(dir.path(), "polar.csv");
    for name in &h[1..] {
        assert!(column(&h, &rows, name).iter().all(|&v| v == 0.0), "{name}");
    }
}

#[test]
fn axial_decay_symmetry_and_speed() {
    let dir = tempfile::tempdir().unwrap();
    let t0 = Instant::now();
    ok(dir.path(), &["axial-decay", "--e-perp", E_PERP_REF, "--e-z", E_Z_REF, "--n-points", "201"]);
    let elapsed = t0.elapsed().as_secs_f64();
    assert!(elapsed < 1.0, "{elapsed} s");
    let (h, rows) = table(dir.path(), "axial_decay.csv");
    assert_eq!(rows.len(), 201);
    for name in ["delta_omega_exact_hz", "delta_omega_pert_hz"] {
        let c = column(&h, &rows, name);
        let scale = c[100].abs();
        for k in 0..100 {
            assert!((c[k] - c[200 - k]).abs() <= 1e-9 * scale, "{name} not even at {k}");
        }
        assert!(c.iter().all(|v| v.abs() <= scale), "{name} peak off centre");
    }
    assert_eq!(column(&h, &rows, "normalized_exact_1")[100].abs(), 1.0);
}

#[test]
fn sense_hahn_fringe_period_and_slope() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["sense", "--kind", "hahn", "--n-e", "801", "--mc-points", "400"]);
    let report: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("sensitivity_hahn_report.json")).unwrap()).unwrap();
    let period = report["fringe_period_v_per_cm"].as_f64().unwrap();
    let oracle = 1.0 / (2.0 * 17.0 * 80e-6);
    assert!((period - oracle).abs() <= 1e-3 * oracle, "{period}");
    assert!((period - 367.6).abs() < 0.1);

    // Zero crossings of the ideal fringe are half a period apart.
    let (h, rows) = table(dir.path(), "fringe_hahn.csv");
    let e = column(&h, &rows, "e_perp_v_per_cm");
    let s = column(&h, &rows, "signal_ideal_1");
    let zeros: Vec<f64> = (1..e.len())
        .filter(|&k| s[k - 1].signum() != s[k].signum())
        .map(|k| e[k - 1] - s[k - 1] * (e[k] - e[k - 1]) / (s[k] - s[k - 1]))
        .collect();
    assert!(zeros.len() >= 3);
    let measured = 2.0 * (zeros[zeros.len() - 1] - zeros[0]) / (zeros.len() - 1) as f64;
    assert!((measured - oracle).abs() <= 1e-3 * oracle, "{measured}");

    let (h, rows) = table(dir.path(), "sensitivity_hahn.csv");
    let t = column(&h, &rows, "total_time_s");
    let a = column(&h, &rows, "delta_e_min_analytic_v_per_cm");
    let slope = nv_electrometry::protocols::log_log_slope(&t, &a);
    assert!((slope + 0.5).abs() < 1e-9, "{slope}");
}

#[test]
fn t2star_endpoints() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["t2star"]);
    let (h, rows) = table(dir.path(), "t2star.csv");
    let t2 = column(&h, &rows, "t2_star_s");
    let kappa = column(&h, &rows, "kappa_1");
    assert_eq!(t2[0], 10e-6);
    assert_eq!(kappa[0], 1.0);
    // At the grid end the model sits kappa (T_perp - T_par) above T_par.
    let last = t2.len() - 1;
    assert!((t2[last] - (2e-6 + kappa[last] * 8e-6)).abs() < 1e-18);
    assert!(kappa[last] < 0.01);
    assert!(t2.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn align_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let scan = fixture("alignment_scan.csv");
    ok(dir.path(), &["align", "--scan", scan.to_str().unwrap()]);
    let bytes = std::fs::read(dir.path().join("align.json")).unwrap();
    validate_json("align", &bytes).unwrap();
    let v: serde_json::Value = serde_json::from_slice(&bytes).unwrap();
    let zero = v["control_zero"].as_f64().unwrap();
    // 0.003 mT = 0.03 G of residual axial field.
    assert!(((zero - ALIGN_CONTROL_ZERO) * ALIGN_GAUSS_PER_UNIT).abs() < 0.03, "{zero}");
}

#[test]
fn fit_fixture_recovers_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let data = fixture("polar_reference.csv");
    ok(dir.path(), &["fit", "--data", data.to_str().unwrap()]);
    let bytes = std::fs::read(dir.path().join("fit.json")).unwrap();
    validate_json("fit", &bytes).unwrap();
    let v: serde_json::Value = serde_json::from_slice(&bytes).unwrap();
    let want = [23.6, -4.19e3, 81.6e3, 32.0, 22.0];
    for (p, w) in v["parameters"].as_array().unwrap().iter().zip(want) {
        let got = p["value"].as_f64().unwrap();
        assert!((got - w).abs() <= 1e-6 * w.abs(), "{}: {got} vs {w}", p["name"]);
    }
    assert_eq!(v["frame_index"], 0);
}

#[test]
fn charge_prints_field() {
    let out = bin().args(["charge", "1", "150e-9"]).output().unwrap();
    assert!(out.status.success());
    let v: f64 = String::from_utf8_lossy(&out.stdout).trim().parse().unwrap();
    assert!((v - 6.40e2).abs() / 6.40e2 < 5e-3, "{v}");

    let out = bin().args(["--format", "json", "charge", "1", "35e-9"]).output().unwrap();
    validate_json("charge", &out.stdout).unwrap();
    let j: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let v = j["field_v_per_cm"].as_f64().unwrap();
    assert!((v - 1.175e4).abs() / 1.175e4 < 5e-3, "{v}");
}

#[test]
fn odmr_spectrum_has_six_dips() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["odmr", "--b-z", "5", "--linewidth-hz", "2e5"]);
    let (h, rows) = table(dir.path(), "odmr.csv");
    assert_eq!(h, ["frequency_hz", "fluorescence_1"]);
    let f = column(&h, &rows, "fluorescence_1");
    let dips = (1..f.len() - 1).filter(|&k| f[k] < f[k - 1] && f[k] <= f[k + 1]).count();
    assert_eq!(dips, 6);
    let (_, lines) = table(dir.path(), "odmr_lines.csv");
    assert_eq!(lines.len(), 6);
}

#[test]
fn json_outputs_match_schemas() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["--format", "json", "polar", "--e-perp", "1000", "--n-angles", "36"]);
    ok(dir.path(), &["--format", "json", "sense", "--kind", "fid", "--n-e", "11", "--mc-points", "50"]);
    ok(dir.path(), &["--format", "json", "axial-decay", "--n-points", "11"]);
    ok(dir.path(), &["--format", "json", "t2star", "--n-points", "5"]);
    ok(dir.path(), &["--format", "json", "odmr", "--n-points", "50"]);
    for table in [
        "polar.json",
        "fringe_fid.json",
        "sensitivity_fid.json",
        "axial_decay.json",
        "t2star.json",
        "odmr.json",
        "odmr_lines.json",
    ] {
        let bytes = std::fs::read(dir.path().join(table)).unwrap();
        validate_json("table", &bytes).unwrap_or_else(|e| panic!("{table}: {e}"));
        let v: serde_json::Value = serde_json::from_slice(&bytes).unwrap();
        let width = v["columns"].as_array().unwrap().len();
        assert!(v["rows"].as_array().unwrap().iter().all(|r| r.as_array().unwrap().len() == width));
    }
    let report = std::fs::read(dir.path().join("sensitivity_fid_report.json")).unwrap();
    validate_json("sensitivity_report", &report).unwrap();
}

#[test]
fn schemas_reject_malformed_documents() {
    assert!(validate_json("align", br#"{"points": 2}"#).is_err());
    assert!(validate_json("table", br#"{"columns": ["a"], "rows": [["x"]]}"#).is_err());
}

#[test]
fn csv_headers_carry_units() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["polar", "--n-angles", "8"]);
    ok(dir.path(), &["axial-decay", "--n-points", "5"]);
    ok(dir.path(), &["sense", "--n-e", "5", "--mc-points", "20"]);
    ok(dir.path(), &["t2star", "--n-points", "3"]);
    ok(dir.path(), &["odmr", "--n-points", "10"]);
    let units = ["_hz", "_deg", "_gauss", "_s", "_v_per_cm", "_1"];
    for entry in std::fs::read_dir(dir.path()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "csv") {
            let (h, _) = read_table(&std::fs::read(&path).unwrap());
            for name in h {
                assert!(units.iter().any(|u| name.ends_with(u)), "{}: {name}", path.display());
            }
        }
    }
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let code = |args: &[&str]| run_in(dir.path(), args).status.code().unwrap();

    assert_eq!(code(&["polar", "--no-such-flag"]), 2);
    assert_eq!(code(&["nonsense"]), 2);
    assert_eq!(code(&["polar", "--n-angles", "4"]), 2);
    assert_eq!(code(&["--format", "xml", "polar"]), 2);
    // Zeeman energy above D_gs: refused by the second-order model.
    assert_eq!(code(&["polar", "--b-perp", "2000"]), 3);
    assert_eq!(code(&["fit", "--data", "/nonexistent/polar.csv"]), 4);

    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "phi_b_deg,delta_omega_hz\n0,1\n5,2\n10,oops\n").unwrap();
    let out = run_in(dir.path(), &["fit", "--data", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 4"), "{err}");

    let out = run_in(dir.path(), &["polar", "--b-perp", "2000"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("perturbative regime"));
}

#[test]
fn config_file_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"d_perp": 34.0, "format": "json", "seed": 3}"#).unwrap();
    let c = cfg.to_str().unwrap();
    ok(dir.path(), &["--config", c, "sense", "--n-e", "5", "--mc-points", "20"]);
    let v: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("sensitivity_hahn_report.json")).unwrap()).unwrap();
    // Doubling d_perp halves the period.
    assert!((v["fringe_period_v_per_cm"].as_f64().unwrap() - 1.0 / (2.0 * 34.0 * 80e-6)).abs() < 1e-9);
    assert_eq!(v["seed"], 3);
    assert!(dir.path().join("fringe_hahn.json").exists());

    ok(dir.path(), &["--config", c, "--format", "csv", "--seed", "4", "t2star", "--n-points", "3"]);
    assert!(dir.path().join("t2star.csv").exists());

    std::fs::write(&cfg, r#"{"d_perp": 34.0, "colour": "blue"}"#).unwrap();
    assert_eq!(run_in(dir.path(), &["--config", c, "t2star"]).status.code(), Some(2));
    std::fs::write(&cfg, r#"{"d_par": 50.0}"#).unwrap();
    assert_eq!(run_in(dir.path(), &["--config", c, "t2star"]).status.code(), Some(2));
    std::fs::write(&cfg, "{ not json").unwrap();
    assert_eq!(run_in(dir.path(), &["--config", c, "t2star"]).status.code(), Some(4));
}

#[test]
fn waveform_csv_drives_a_hahn_echo() {
    use nv_electrometry::io::read_waveform;
    use nv_electrometry::protocols::{phase_hahn, PulseSequence, SequenceKind};
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.csv");
    std::fs::write(&path, "time_s,e_perp_v_per_cm\n0,250\n80e-6,-250\n160e-6,0\n").unwrap();
    let w = read_waveform(&path).unwrap();
    let seq = PulseSequence::new(SequenceKind::HahnEcho, 80e-6, w, 0.0).unwrap();
    let phi = phase_hahn(&seq, &seq.detuning(17.0)).unwrap();
    let oracle = 4.0 * std::f64::consts::PI * 17.0 * 250.0 * 80e-6;
    assert!((phi - oracle).abs() <= 1e-12 * oracle);
}
