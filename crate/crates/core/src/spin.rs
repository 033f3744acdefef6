//! Dense complex square matrices and spin-1 operators.
//!
//! Basis ordering is `{|+1>, |0>, |-1>}` for the electron spin and, in the
//! hyperfine product space, `|m_s> (x) |m_I>` with both factors ordered from
//! `+1` to `-1`. Index `3 * i_s + i_I` addresses the product state.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Row-major complex square matrix. Hamiltonians are stored divided by
/// Planck's constant, in Hz.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl SpinMatrix {
    pub fn zeros(dim: usize) -> Self {
        SpinMatrix {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(d, 0.0);
        }
        m
    }

    /// Builds from rows; panics if the rows are not square.
    pub fn from_rows(rows: &[Vec<C64>]) -> Self {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            assert_eq!(row.len(), dim, "SpinMatrix::from_rows: matrix must be square");
            data.extend_from_slice(row);
        }
        SpinMatrix { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn scale(&self, s: f64) -> Self {
        SpinMatrix {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_c(&self, s: C64) -> Self {
        SpinMatrix {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise deviation from Hermiticity.
    pub fn hermitian_deviation(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, rel_tol: f64) -> bool {
        self.hermitian_deviation() <= rel_tol * self.norm().max(f64::MIN_POSITIVE)
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    /// Kronecker product `self (x) other`.
    pub fn kron(&self, other: &Self) -> Self {
        let (a, b) = (self.dim, other.dim);
        let mut out = Self::zeros(a * b);
        for i in 0..a {
            for j in 0..a {
                let s = self[(i, j)];
                if s == ZERO {
                    continue;
                }
                for k in 0..b {
                    for l in 0..b {
                        out[(i * b + k, j * b + l)] = s * other[(k, l)];
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        let n = self.dim;
        (0..n)
            .map(|i| (0..n).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    /// `<u| self |v>`.
    pub fn expectation(&self, u: &[C64], v: &[C64]) -> C64 {
        let hv = self.mul_vec(v);
        u.iter().zip(&hv).map(|(a, b)| a.conj() * b).sum()
    }

    /// Column `j` as a vector.
    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl Index<(usize, usize)> for SpinMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for SpinMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Add for &SpinMatrix {
    type Output = SpinMatrix;
    fn add(self, rhs: &SpinMatrix) -> SpinMatrix {
        assert_eq!(self.dim, rhs.dim);
        SpinMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &SpinMatrix {
    type Output = SpinMatrix;
    fn sub(self, rhs: &SpinMatrix) -> SpinMatrix {
        assert_eq!(self.dim, rhs.dim);
        SpinMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &SpinMatrix {
    type Output = SpinMatrix;
    fn mul(self, rhs: &SpinMatrix) -> SpinMatrix {
        assert_eq!(self.dim, rhs.dim);
        let n = self.dim;
        let mut out = SpinMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

/// Spin-1 matrices.
#[derive(Debug, Clone)]
pub struct SpinOperators {
    pub sx: SpinMatrix,
    pub sy: SpinMatrix,
    pub sz: SpinMatrix,
}

impl SpinOperators {
    pub fn identity(&self) -> SpinMatrix {
        SpinMatrix::identity(3)
    }
}

/// Standard `S = 1` matrices in the `{|+1>, |0>, |-1>}` basis.
pub fn spin_operators() -> SpinOperators {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let c = |re: f64, im: f64| C64::new(re, im);
    let sx = SpinMatrix::from_rows(&[
        vec![ZERO, c(r, 0.0), ZERO],
        vec![c(r, 0.0), ZERO, c(r, 0.0)],
        vec![ZERO, c(r, 0.0), ZERO],
    ]);
    let sy = SpinMatrix::from_rows(&[
        vec![ZERO, c(0.0, -r), ZERO],
        vec![c(0.0, r), ZERO, c(0.0, -r)],
        vec![ZERO, c(0.0, r), ZERO],
    ]);
    let sz = SpinMatrix::from_diagonal(&[1.0, 0.0, -1.0]);
    SpinOperators { sx, sy, sz }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sz_is_diagonal() {
        let s = spin_operators();
        assert_eq!(s.sz, SpinMatrix::from_diagonal(&[1.0, 0.0, -1.0]));
    }

    #[test]
    fn angular_momentum_algebra() {
        let s = spin_operators();
        let comm = s.sx.commutator(&s.sy);
        assert!(comm.max_abs_diff(&s.sz.scale_c(I)) < 1e-12);
        let comm = s.sy.commutator(&s.sz);
        assert!(comm.max_abs_diff(&s.sx.scale_c(I)) < 1e-12);

        let s2 = &(&(&s.sx * &s.sx) + &(&s.sy * &s.sy)) + &(&s.sz * &s.sz);
        assert!(s2.max_abs_diff(&SpinMatrix::identity(3).scale(2.0)) < 1e-12);
    }

    #[test]
    fn kron_dimensions_and_trace() {
        let s = spin_operators();
        let k = s.sz.kron(&s.sz);
        assert_eq!(k.dim(), 9);
        assert_eq!(k[(0, 0)], ONE);
        assert_eq!(k[(8, 8)], ONE);
        assert_eq!(k[(2, 2)], -ONE);
        assert_eq!(k.trace(), ZERO);
    }

    #[test]
    fn operators_are_hermitian() {
        let s = spin_operators();
        for m in [&s.sx, &s.sy, &s.sz] {
            assert_eq!(m.hermitian_deviation(), 0.0);
        }
    }
}
