use std::f64::consts::TAU;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::{ElectricField, MagneticField, NVParams, StrainField};

use super::shift::{delta_omega, delta_omega_exact, Method};

/// One sample of a polar pattern.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PolarPoint {
    /// Azimuth of the non-axial magnetic field, rad.
    pub phi_b: f64,
    pub d_omega_plus: f64,
    pub d_omega_minus: f64,
}

/// Shift of the upper transition versus the in-plane field azimuth, sampled
/// at `n_angles` uniform points in `[0, 2pi)`.
pub fn polar_scan(
    p: &NVParams,
    b_perp: f64,
    b_z: f64,
    e: &ElectricField,
    s: &StrainField,
    n_angles: usize,
    method: Method,
) -> Result<Vec<PolarPoint>> {
    if n_angles < 8 {
        return Err(Error::invalid("n_angles", format!("need at least 8, got {n_angles}")));
    }
    (0..n_angles)
        .map(|k| {
            let phi_b = TAU * k as f64 / n_angles as f64;
            let b = MagneticField::new(b_z, b_perp, phi_b);
            let d = delta_omega(method, p, &b, e, s)?;
            Ok(PolarPoint {
                phi_b,
                d_omega_plus: d.d_omega_plus,
                d_omega_minus: d.d_omega_minus,
            })
        })
        .collect()
}

/// Number of lobes of a closed polar curve `r(phi)`: local maxima of `|r|`
/// on the cyclic grid. Plateaus count once.
pub fn count_lobes(values: &[f64]) -> usize {
    let n = values.len();
    if n < 3 {
        return 0;
    }
    let a: Vec<f64> = values.iter().map(|v| v.abs()).collect();
    let scale = a.iter().cloned().fold(0.0, f64::max);
    if scale == 0.0 {
        return 0;
    }
    let tol = 1e-9 * scale;
    // Drop consecutive near-equal samples so plateaus collapse to one point.
    let mut reduced: Vec<f64> = Vec::with_capacity(n);
    for &v in &a {
        if reduced.last().is_none_or(|&l: &f64| (v - l).abs() > tol) {
            reduced.push(v);
        }
    }
    while reduced.len() > 1 && (reduced[0] - reduced[reduced.len() - 1]).abs() <= tol {
        reduced.pop();
    }
    let m = reduced.len();
    if m < 3 {
        return 0;
    }
    (0..m)
        .filter(|&i| {
            let prev = reduced[(i + m - 1) % m];
            let next = reduced[(i + 1) % m];
            reduced[i] > prev && reduced[i] > next
        })
        .count()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AxialPoint {
    /// Axial field, G.
    pub b_z: f64,
    pub d_omega_plus: f64,
    /// `d_omega_plus` divided by the largest `|d_omega_plus|` of the scan.
    pub normalized: f64,
}

/// Exact upper-transition shift versus the axial field at fixed in-plane
/// geometry (`phi_b` of the in-plane field is taken as 0).
pub fn axial_decay_scan(
    p: &NVParams,
    b_perp: f64,
    e: &ElectricField,
    s: &StrainField,
    b_z_grid: &[f64],
) -> Result<Vec<AxialPoint>> {
    axial_decay_scan_at(p, b_perp, 0.0, e, s, b_z_grid)
}

pub(crate) fn axial_decay_scan_at(
    p: &NVParams,
    b_perp: f64,
    phi_b: f64,
    e: &ElectricField,
    s: &StrainField,
    b_z_grid: &[f64],
) -> Result<Vec<AxialPoint>> {
    let raw = b_z_grid
        .iter()
        .map(|&b_z| {
            let b = MagneticField::new(b_z, b_perp, phi_b);
            Ok((b_z, delta_omega_exact(p, &b, e, s)?.d_omega_plus))
        })
        .collect::<Result<Vec<_>>>()?;
    let peak = raw.iter().map(|(_, d)| d.abs()).fold(0.0, f64::max);
    Ok(raw
        .into_iter()
        .map(|(b_z, d)| AxialPoint {
            b_z,
            d_omega_plus: d,
            normalized: if peak > 0.0 { d / peak } else { 0.0 },
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference_fields(p: &NVParams, phi_e: f64, phi_s: f64) -> (ElectricField, StrainField) {
        (
            ElectricField::from_frequency(-4.19e3, 81.6e3, phi_e, p),
            StrainField::from_frequency(0.0, 0.189e6, phi_s, p),
        )
    }

    #[test]
    fn rejects_coarse_grid() {
        let p = NVParams::default();
        let (e, s) = reference_fields(&p, 0.0, 0.0);
        assert!(polar_scan(&p, 23.6, 0.0, &e, &s, 7, Method::Perturbative).is_err());
    }

    #[test]
    fn aligned_pattern_is_four_leaf_and_pi_periodic() {
        let p = NVParams::default();
        let (e, s) = reference_fields(&p, 0.4, 0.4);
        let scan = polar_scan(&p, 23.6, 0.0, &e, &s, 360, Method::Perturbative).unwrap();
        let vals: Vec<f64> = scan.iter().map(|q| q.d_omega_plus).collect();
        for k in 0..180 {
            assert!((vals[k] - vals[k + 180]).abs() <= 1e-9 * 1e5);
        }
        assert_eq!(count_lobes(&vals), 4);
        let max = vals.iter().cloned().fold(f64::MIN, f64::max);
        let min = vals.iter().cloned().fold(f64::MAX, f64::min);
        let (hi, lo) = (-4.19e3 + 81.6e3, -4.19e3 - 81.6e3);
        assert!((max - hi).abs() <= 0.02 * hi.abs(), "{max}");
        assert!((min - lo).abs() <= 0.02 * lo.abs(), "{min}");
    }

    #[test]
    fn rotated_field_distorts_pattern() {
        let p = NVParams::default();
        let (e0, s) = reference_fields(&p, 0.4, 0.4);
        let (e1, _) = reference_fields(&p, 0.4 + 10f64.to_radians(), 0.4);
        let a = polar_scan(&p, 23.6, 0.0, &e0, &s, 360, Method::Perturbative).unwrap();
        let b = polar_scan(&p, 23.6, 0.0, &e1, &s, 360, Method::Perturbative).unwrap();
        let argmax = |v: &[PolarPoint]| {
            v.iter()
                .enumerate()
                .max_by(|x, y| x.1.d_omega_plus.total_cmp(&y.1.d_omega_plus))
                .unwrap()
                .0
        };
        assert_ne!(argmax(&a) % 180, argmax(&b) % 180);
    }

    #[test]
    fn zero_field_is_flat() {
        let p = NVParams::default();
        let (_, s) = reference_fields(&p, 0.0, 0.3);
        let scan = polar_scan(&p, 23.6, 0.0, &ElectricField::zero(), &s, 16, Method::Exact).unwrap();
        assert!(scan.iter().all(|q| q.d_omega_plus == 0.0));
        assert_eq!(count_lobes(&[0.0; 16]), 0);
    }

    #[test]
    fn lobe_counter_on_closed_forms() {
        let n = 720;
        let curve = |k: usize| (k as f64 * TAU / n as f64 * 2.0).cos();
        let v: Vec<f64> = (0..n).map(curve).collect();
        assert_eq!(count_lobes(&v), 4);
        let v: Vec<f64> = (0..n).map(|k| 1.0 + 0.5 * (k as f64 * TAU / n as f64).cos()).collect();
        assert_eq!(count_lobes(&v), 1);
    }

    #[test]
    fn axial_decay_even_and_peaked() {
        let p = NVParams::default();
        let (e, s) = reference_fields(&p, 0.3, 0.3);
        let grid: Vec<f64> = (-100..=100).map(|k| k as f64 * 0.5).collect();
        let scan = axial_decay_scan(&p, 23.6, &e, &s, &grid).unwrap();
        for k in 0..grid.len() {
            let mirror = &scan[grid.len() - 1 - k];
            assert!((scan[k].d_omega_plus - mirror.d_omega_plus).abs() <= 1e-3);
        }
        let centre = scan[100].d_omega_plus.abs();
        assert!(scan.iter().all(|q| q.d_omega_plus.abs() <= centre + 1e-6));
        assert!((scan[100].normalized.abs() - 1.0).abs() < 1e-12);
    }
}
