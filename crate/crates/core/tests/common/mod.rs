#![allow(dead_code)]

use std::f64::consts::TAU;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use nv_electrometry::calibration::{polar_model, synthesize_alignment_scan, AlignmentScan, PolarData, PolarParams};
use nv_electrometry::params::{effective_field, ElectricField, NVParams, StrainField};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

pub const SIGMA_PERP_HZ: f64 = 0.189e6;

pub fn manifest_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub fn fixture(name: &str) -> PathBuf {
    manifest_dir().join("fixtures").join(name)
}

pub fn schema_path(name: &str) -> PathBuf {
    manifest_dir().join("schemas").join(format!("{name}.schema.json"))
}

/// Set `UPDATE_GOLDEN=1` to rewrite fixtures and golden files.
pub fn updating() -> bool {
    std::env::var_os("UPDATE_GOLDEN").is_some_and(|v| v == "1")
}

pub fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_nv-electrometry"))
}

pub fn run_in(dir: &Path, args: &[&str]) -> Output {
    bin()
        .args(args)
        .arg("--out")
        .arg(dir)
        .output()
        .expect("binary runs")
}

pub fn reference_params() -> PolarParams {
    PolarParams {
        b_perp: 23.6,
        d_par_e_z: -4.19e3,
        d_perp_e_perp: 81.6e3,
        phi_e: 32f64.to_radians(),
        phi_sigma: 22f64.to_radians(),
    }
}

/// Forward-model polar pattern at `n` uniform azimuths, optionally with
/// Gaussian noise of standard deviation `noise` Hz.
pub fn synth_polar(t: &PolarParams, n: usize, noise: f64, seed: u64, with_sigma: bool) -> PolarData {
    let p = NVParams::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let phi_b: Vec<f64> = (0..n).map(|k| TAU * k as f64 / n as f64).collect();
    let delta_omega = phi_b
        .iter()
        .map(|&phi| {
            let v = polar_model(&p, t, SIGMA_PERP_HZ, 0.0, 0, phi).unwrap();
            if noise > 0.0 {
                v + Normal::new(0.0, noise).unwrap().sample(&mut rng)
            } else {
                v
            }
        })
        .collect();
    PolarData {
        phi_b,
        delta_omega,
        sigma: with_sigma.then(|| vec![noise; n]),
    }
}

pub const ALIGN_CONTROL_ZERO: f64 = 0.137;
pub const ALIGN_GAUSS_PER_UNIT: f64 = 2.0;

/// Outer-pair splitting scan across the axial-field zero in the mixed
/// regime (`B_perp = 23.6 G` with strain and the reference electric field).
pub fn synth_alignment(control_zero: f64, b_perp: f64, phi_b: f64, n: usize) -> AlignmentScan {
    let p = NVParams::default();
    let e = ElectricField::from_frequency(-4.19e3, 81.6e3, 32f64.to_radians(), &p);
    let s = StrainField::from_frequency(0.0, SIGMA_PERP_HZ, 22f64.to_radians(), &p);
    let control: Vec<f64> = (0..n)
        .map(|k| -1.0 + 2.0 * k as f64 / (n - 1) as f64)
        .collect();
    synthesize_alignment_scan(
        &p,
        &control,
        control_zero,
        ALIGN_GAUSS_PER_UNIT,
        b_perp,
        phi_b,
        &effective_field(&e, &s),
    )
    .unwrap()
}

pub fn read_table(bytes: &[u8]) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut r = csv::Reader::from_reader(bytes);
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(|v| v.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

pub fn column(header: &[String], rows: &[Vec<f64>], name: &str) -> Vec<f64> {
    let j = header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"));
    rows.iter().map(|r| r[j]).collect()
}

pub fn validate_json(schema: &str, bytes: &[u8]) -> Result<(), String> {
    let schema: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(schema_path(schema)).unwrap()).unwrap();
    let instance: serde_json::Value = serde_json::from_slice(bytes).map_err(|e| e.to_string())?;
    let validator = jsonschema::validator_for(&schema).map_err(|e| e.to_string())?;
    let errors: Vec<String> = validator.iter_errors(&instance).map(|e| e.to_string()).collect();
    if errors.is_empty() {
        Ok(())
    } else {
        Err(errors.join("; "))
    }
}

/// Reference electric field in V/cm for the default Stark coefficients.
pub const E_PERP_REF: &str = "4800";
pub const E_Z_REF: &str = "-11971.428571428572";

/// Seeded regression cases covering every subcommand: name and arguments.
pub fn golden_cases() -> Vec<(&'static str, Vec<String>)> {
    let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    let scan = fixture("alignment_scan.csv").display().to_string();
    let polar = fixture("polar_reference.csv").display().to_string();
    let noisy = fixture("polar_noisy.csv").display().to_string();
    vec![
        ("polar", s(&["polar", "--e-perp", E_PERP_REF, "--e-z", E_Z_REF, "--n-angles", "72"])),
        ("polar_json", s(&["polar", "--format", "json", "--e-perp", "1000", "--n-angles", "36"])),
        (
            "axial_decay",
            s(&["axial-decay", "--e-perp", E_PERP_REF, "--e-z", E_Z_REF, "--n-points", "41"]),
        ),
        (
            "sense_hahn",
            s(&["sense", "--kind", "hahn", "--n-e", "41", "--n-t", "7", "--mc-points", "500", "--seed", "7"]),
        ),
        (
            "sense_fid",
            s(&["sense", "--kind", "fid", "--n-e", "41", "--n-t", "7", "--mc-points", "500", "--seed", "7"]),
        ),
        ("t2star", s(&["t2star", "--n-points", "21"])),
        ("align", vec!["align".into(), "--scan".into(), scan]),
        ("fit", vec!["fit".into(), "--data".into(), polar]),
        ("fit_noisy", vec!["fit".into(), "--data".into(), noisy]),
        ("charge", s(&["charge", "1", "150e-9"])),
        ("odmr", s(&["odmr", "--b-z", "5", "--n-points", "401"])),
    ]
}

/// Runs a case in a fresh directory and returns `(file name, bytes)` for
/// every output, with stdout recorded as `stdout.txt` when nothing is
/// written to disk.
pub fn run_case(args: &[String]) -> Vec<(String, Vec<u8>)> {
    let dir = tempfile::tempdir().unwrap();
    let out = bin().args(args).arg("--out").arg(dir.path()).output().unwrap();
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).unwrap())
        })
        .collect();
    if files.is_empty() {
        files.push(("stdout.txt".into(), out.stdout));
    }
    files.sort();
    files
}
