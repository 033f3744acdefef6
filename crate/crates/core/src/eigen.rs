//! Spectral decomposition of small complex Hermitian matrices.
//!
//! 3x3 matrices start from the closed-form (trigonometric) roots of the
//! characteristic polynomial with eigenvectors taken from cross products of
//! the rows of `H - lambda I`. That starting basis is then polished with cyclic
//! complex Jacobi sweeps on `V^dagger H V`, which recovers full precision for
//! near-degenerate pairs (the `m_s = +-1` doublet is split by kHz on a GHz
//! scale, where the trigonometric roots alone lose ~10 Hz). Other dimensions
//! use the Jacobi iteration from the identity.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::spin::{SpinMatrix, C64, ZERO};

/// Relative tolerance on Hermiticity of the input.
pub const HERMITIAN_TOL: f64 = 1e-12;

const MAX_SWEEPS: usize = 64;

/// Eigenvalues in ascending order and the matching orthonormal eigenvectors
/// as the columns of `vectors`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSystem {
    pub values: Vec<f64>,
    pub vectors: SpinMatrix,
}

impl EigenSystem {
    pub fn vector(&self, k: usize) -> Vec<C64> {
        self.vectors.column(k)
    }

    /// `V diag(lambda) V^dagger`.
    pub fn reconstruct(&self) -> SpinMatrix {
        let n = self.values.len();
        let mut out = SpinMatrix::zeros(n);
        for k in 0..n {
            let lam = self.values[k];
            for i in 0..n {
                let vi = self.vectors[(i, k)] * lam;
                for j in 0..n {
                    out[(i, j)] += vi * self.vectors[(j, k)].conj();
                }
            }
        }
        out
    }
}

/// Diagonalizes a Hermitian matrix.
///
/// Output is deterministic: eigenvalues ascend and each eigenvector is scaled
/// so that its first component of largest modulus is real and positive.
pub fn eigensolve(h: &SpinMatrix) -> Result<EigenSystem> {
    let norm = h.norm();
    let deviation = h.hermitian_deviation();
    let tolerance = HERMITIAN_TOL * norm.max(f64::MIN_POSITIVE);
    if deviation > tolerance {
        return Err(Error::NotHermitian {
            deviation,
            tolerance,
        });
    }

    let n = h.dim();
    if n == 0 {
        return Ok(EigenSystem {
            values: vec![],
            vectors: SpinMatrix::zeros(0),
        });
    }

    let start = if n == 3 {
        closed_form_basis(h).unwrap_or_else(|| SpinMatrix::identity(3))
    } else {
        SpinMatrix::identity(n)
    };

    let mut a = &(&start.adjoint() * h) * &start;
    let mut v = start;
    jacobi(&mut a, &mut v, norm);

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&x, &y| diag[x].total_cmp(&diag[y]).then(x.cmp(&y)));

    let mut vectors = SpinMatrix::zeros(n);
    let mut values = Vec::with_capacity(n);
    for (k, &src) in order.iter().enumerate() {
        values.push(diag[src]);
        let col = fix_phase(v.column(src));
        for i in 0..n {
            vectors[(i, k)] = col[i];
        }
    }
    Ok(EigenSystem { values, vectors })
}

/// Cyclic Jacobi on a Hermitian matrix; accumulates rotations into `v`.
fn jacobi(a: &mut SpinMatrix, v: &mut SpinMatrix, scale: f64) {
    let n = a.dim();
    let floor = f64::EPSILON * 1e-2 * scale.max(f64::MIN_POSITIVE);
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= floor {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(a, v, p, q);
            }
        }
    }
}

/// Zeroes `a[p][q]` with a unitary acting on columns/rows `p`, `q`.
fn rotate(a: &mut SpinMatrix, v: &mut SpinMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    // Phase-rotate so the pivot is real, then a real Jacobi rotation.
    let phase = apq / mag; // e^{i theta}
    let tau = (aqq - app) / (2.0 * mag);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    // U restricted to (p, q): [[c, s], [-s e^{-i theta}, c e^{-i theta}]]
    let pc = phase.conj();
    let u_pp = C64::new(c, 0.0);
    let u_pq = C64::new(s, 0.0);
    let u_qp = pc * (-s);
    let u_qq = pc * c;

    let n = a.dim();
    // A <- A U (columns)
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * u_pp + akq * u_qp;
        a[(k, q)] = akp * u_pq + akq * u_qq;
    }
    // A <- U^dagger A (rows)
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = u_pp.conj() * apk + u_qp.conj() * aqk;
        a[(q, k)] = u_pq.conj() * apk + u_qq.conj() * aqk;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * u_pp + vkq * u_qp;
        v[(k, q)] = vkp * u_pq + vkq * u_qq;
    }
}

/// Trigonometric roots of the characteristic polynomial of a Hermitian 3x3.
pub fn closed_form_eigenvalues(h: &SpinMatrix) -> [f64; 3] {
    let q = h.trace().re / 3.0;
    let shifted = &SpinMatrix::identity(3).scale(-q) + h;
    let p = (shifted.norm().powi(2) / 6.0).sqrt();
    if p == 0.0 {
        return [q; 3];
    }
    let b = shifted.scale(1.0 / p);
    let r = (det3(&b).re / 2.0).clamp(-1.0, 1.0);
    let phi = r.acos() / 3.0;
    let hi = q + 2.0 * p * phi.cos();
    let lo = q + 2.0 * p * (phi + TAU / 3.0).cos();
    let mid = 3.0 * q - hi - lo;
    [lo, mid, hi]
}

fn det3(m: &SpinMatrix) -> C64 {
    m[(0, 0)] * (m[(1, 1)] * m[(2, 2)] - m[(1, 2)] * m[(2, 1)])
        - m[(0, 1)] * (m[(1, 0)] * m[(2, 2)] - m[(1, 2)] * m[(2, 0)])
        + m[(0, 2)] * (m[(1, 0)] * m[(2, 1)] - m[(1, 1)] * m[(2, 0)])
}

fn cross_conj(a: [C64; 3], b: [C64; 3]) -> [C64; 3] {
    [
        (a[1] * b[2] - a[2] * b[1]).conj(),
        (a[2] * b[0] - a[0] * b[2]).conj(),
        (a[0] * b[1] - a[1] * b[0]).conj(),
    ]
}

fn vnorm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Orthonormal starting basis from the closed-form roots; `None` when the
/// cross products are too small to define a direction (degenerate roots).
fn closed_form_basis(h: &SpinMatrix) -> Option<SpinMatrix> {
    let values = closed_form_eigenvalues(h);
    let scale = h.norm().max(f64::MIN_POSITIVE);
    let mut basis: Vec<Vec<C64>> = Vec::with_capacity(3);
    for &lam in &values {
        let row = |i: usize| {
            let mut r = [h[(i, 0)], h[(i, 1)], h[(i, 2)]];
            r[i] -= lam;
            r
        };
        let candidates = [
            cross_conj(row(0), row(1)),
            cross_conj(row(0), row(2)),
            cross_conj(row(1), row(2)),
        ];
        let best = candidates
            .iter()
            .max_by(|a, b| vnorm(&a[..]).total_cmp(&vnorm(&b[..])))?;
        let mut v = best.to_vec();
        // Gram-Schmidt against the vectors already accepted.
        for u in &basis {
            let proj: C64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (vi, ui) in v.iter_mut().zip(u) {
                *vi -= proj * ui;
            }
        }
        let nv = vnorm(&v);
        if nv <= 1e-6 * scale * scale {
            return None;
        }
        v.iter_mut().for_each(|z| *z /= nv);
        basis.push(v);
    }
    let mut m = SpinMatrix::zeros(3);
    for (k, col) in basis.iter().enumerate() {
        for i in 0..3 {
            m[(i, k)] = col[i];
        }
    }
    Some(m)
}

fn fix_phase(mut v: Vec<C64>) -> Vec<C64> {
    let max = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return v;
    }
    // First component within rounding of the maximum modulus.
    let pivot = v
        .iter()
        .position(|z| z.norm() >= max * (1.0 - 1e-9))
        .unwrap_or(0);
    let ph = v[pivot].conj() / v[pivot].norm();
    v.iter_mut().for_each(|z| *z *= ph);
    v[pivot] = C64::new(v[pivot].re, 0.0);
    v
}
