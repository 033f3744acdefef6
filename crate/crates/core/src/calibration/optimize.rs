//! Thin wrappers over the simplex and Levenberg-Marquardt solvers used by
//! the polar-pattern fit, plus a fixed-step numerical Hessian.

use argmin::core::{CostFunction, Executor, State};
use argmin::solver::neldermead::NelderMead;
use levenberg_marquardt::{LeastSquaresProblem, LevenbergMarquardt};
use nalgebra::storage::Owned;
use nalgebra::{DMatrix, DVector, Dyn};

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    pub converged: bool,
}

struct Cost<F>(F);

impl<F: Fn(&[f64]) -> f64> CostFunction for Cost<F> {
    type Param = Vec<f64>;
    type Output = f64;

    fn cost(&self, p: &Vec<f64>) -> Result<f64, argmin::core::Error> {
        let v = (self.0)(p);
        Ok(if v.is_nan() { f64::INFINITY } else { v })
    }
}

/// Simplex minimization from `x0` with initial edge lengths `scale`.
/// Stops when the standard deviation of the vertex values drops below
/// `sd_tol` or after `max_iters` iterations.
pub fn nelder_mead(
    f: impl Fn(&[f64]) -> f64,
    x0: &[f64],
    scale: &[f64],
    sd_tol: f64,
    max_iters: u64,
) -> Minimum {
    let mut vertices = vec![x0.to_vec()];
    for (j, s) in scale.iter().enumerate() {
        let mut x = x0.to_vec();
        x[j] += s;
        vertices.push(x);
    }
    let fallback = |value: f64| Minimum {
        x: x0.to_vec(),
        value,
        evaluations: 1,
        converged: false,
    };
    let solver = match NelderMead::new(vertices).with_sd_tolerance(sd_tol) {
        Ok(s) => s,
        Err(_) => return fallback(f(x0)),
    };
    let f0 = f(x0);
    match Executor::new(Cost(&f), solver)
        .configure(|s| s.max_iters(max_iters))
        .run()
    {
        Ok(res) => {
            let state = res.state();
            let converged = state.get_iter() < max_iters;
            let evaluations = state.get_func_counts().values().sum::<u64>() as usize;
            match state.get_best_param() {
                Some(x) => Minimum {
                    x: x.clone(),
                    value: state.get_best_cost(),
                    evaluations,
                    converged,
                },
                None => fallback(f0),
            }
        }
        Err(_) => fallback(f0),
    }
}

struct Residuals<R> {
    r: R,
    x: DVector<f64>,
    scale: Vec<f64>,
}

impl<R: Fn(&[f64]) -> Option<Vec<f64>>> LeastSquaresProblem<f64, Dyn, Dyn> for Residuals<R> {
    type ResidualStorage = Owned<f64, Dyn>;
    type JacobianStorage = Owned<f64, Dyn, Dyn>;
    type ParameterStorage = Owned<f64, Dyn>;

    fn set_params(&mut self, x: &DVector<f64>) {
        self.x.copy_from(x);
    }

    fn params(&self) -> DVector<f64> {
        self.x.clone()
    }

    fn residuals(&self) -> Option<DVector<f64>> {
        (self.r)(self.x.as_slice()).map(DVector::from_vec)
    }

    fn jacobian(&self) -> Option<DMatrix<f64>> {
        let x = self.x.as_slice();
        let n = x.len();
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            let h = 1e-6 * x[j].abs().max(self.scale[j]);
            let mut xp = x.to_vec();
            let mut xm = x.to_vec();
            xp[j] += h;
            xm[j] -= h;
            let (rp, rm) = ((self.r)(&xp)?, (self.r)(&xm)?);
            cols.push(DVector::from_iterator(
                rp.len(),
                rp.iter().zip(&rm).map(|(a, b)| (a - b) / (2.0 * h)),
            ));
        }
        Some(DMatrix::from_columns(&cols))
    }
}

/// Levenberg-Marquardt on `r(x)` with a central-difference Jacobian;
/// `value` is `sum r_i^2`.
pub fn levenberg_marquardt(r: impl Fn(&[f64]) -> Option<Vec<f64>>, x0: &[f64], scale: &[f64]) -> Minimum {
    let problem = Residuals {
        r,
        x: DVector::from_column_slice(x0),
        scale: scale.to_vec(),
    };
    let (problem, report) = LevenbergMarquardt::new()
        .with_ftol(1e-15)
        .with_xtol(1e-15)
        .with_gtol(1e-15)
        .with_patience(200)
        .minimize(problem);
    Minimum {
        x: problem.x.as_slice().to_vec(),
        value: 2.0 * report.objective_function,
        evaluations: report.number_of_evaluations,
        converged: report.termination.was_successful(),
    }
}

/// Central-difference Hessian with step `rel * max(|x_j|, scale_j)`.
pub fn numerical_hessian(f: impl Fn(&[f64]) -> f64, x: &[f64], scale: &[f64], rel: f64) -> DMatrix<f64> {
    let n = x.len();
    let h: Vec<f64> = (0..n).map(|j| rel * x[j].abs().max(scale[j])).collect();
    let at = |d: &[(usize, f64)]| {
        let mut y = x.to_vec();
        for &(j, s) in d {
            y[j] += s * h[j];
        }
        f(&y)
    };
    let f0 = f(x);
    let mut hess = DMatrix::zeros(n, n);
    for i in 0..n {
        hess[(i, i)] = (at(&[(i, 1.0)]) - 2.0 * f0 + at(&[(i, -1.0)])) / (h[i] * h[i]);
        for j in 0..i {
            let v = (at(&[(i, 1.0), (j, 1.0)]) - at(&[(i, 1.0), (j, -1.0)]) - at(&[(i, -1.0), (j, 1.0)])
                + at(&[(i, -1.0), (j, -1.0)]))
                / (4.0 * h[i] * h[j]);
            hess[(i, j)] = v;
            hess[(j, i)] = v;
        }
    }
    hess
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rosenbrock(x: &[f64]) -> f64 {
        (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2)
    }

    #[test]
    fn simplex_rosenbrock() {
        let m = nelder_mead(rosenbrock, &[-1.2, 1.0], &[0.5, 0.5], 1e-16, 5000);
        assert!(m.converged);
        assert!((m.x[0] - 1.0).abs() < 1e-4 && (m.x[1] - 1.0).abs() < 1e-4, "{:?}", m.x);
    }

    #[test]
    fn lm_exponential_fit() {
        let t: Vec<f64> = (0..20).map(|k| k as f64 * 0.25).collect();
        let y: Vec<f64> = t.iter().map(|t| 3.0 * (-0.7 * t).exp() + 0.2).collect();
        let r = |p: &[f64]| Some(t.iter().zip(&y).map(|(t, y)| p[0] * (-p[1] * t).exp() + p[2] - y).collect());
        let m = levenberg_marquardt(r, &[1.0, 0.3, 0.0], &[1.0, 1.0, 1.0]);
        for (a, b) in m.x.iter().zip([3.0, 0.7, 0.2]) {
            assert!((a - b).abs() < 1e-9, "{:?}", m.x);
        }
    }

    #[test]
    fn hessian_of_quadratic() {
        let f = |x: &[f64]| 3.0 * x[0] * x[0] + 2.0 * x[0] * x[1] + 5.0 * x[1] * x[1];
        let h = numerical_hessian(f, &[0.3, -0.2], &[1.0, 1.0], 1e-4);
        assert!((h[(0, 0)] - 6.0).abs() < 1e-5);
        assert!((h[(0, 1)] - 2.0).abs() < 1e-5);
        assert!((h[(1, 1)] - 10.0).abs() < 1e-5);
    }
}
