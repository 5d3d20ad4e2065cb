//! Desk-scale demonstration: a discretized first-kind integral equation
//! `\int_0^1 k(x, y) u(y) dy = f(x)` solved by the regularized route.
//!
//! The kernel is sampled on a uniform grid and the trapezoid weights are
//! folded into the system matrix (`A[i][j] = w_j k(x_i, y_j)`), so solving
//! `A u = f` is exactly the discretized equation. The right-hand side is
//! manufactured from a built-in true solution, which gives the demo a
//! checkable target: the relative recovery error at every regularization
//! step.

use num_complex::Complex64;

use crate::error::{LinalgError, Result};
use crate::matrix::{matmul_compensated, solve_shifted_refined, ComplexMatrix};
use crate::tol;

/// Built-in smooth kernels on the unit square.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kernel {
    /// `k(x, y) = exp(-(x-y)^2)`
    Gaussian,
    /// `k(x, y) = 1 / (1 + (x-y)^2)`
    Lorentzian,
}

impl Kernel {
    fn eval(&self, x: f64, y: f64) -> f64 {
        let d = x - y;
        match self {
            Kernel::Gaussian => (-d * d).exp(),
            Kernel::Lorentzian => 1.0 / (1.0 + d * d),
        }
    }
}

/// Built-in true solutions the right-hand side is manufactured from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrueSolution {
    /// `u(y) = sin(pi y)`
    SinPi,
    /// `u(y) = 0`
    Zero,
}

impl TrueSolution {
    fn eval(&self, y: f64) -> f64 {
        match self {
            TrueSolution::SinPi => (std::f64::consts::PI * y).sin(),
            TrueSolution::Zero => 0.0,
        }
    }
}

/// One regularization step of the demo.
#[derive(Debug, Clone)]
pub struct FredholmStep {
    pub mu: f64,
    /// `|u_mu - u_true| / |u_true|` (absolute error when the true solution
    /// is zero).
    pub rel_error: f64,
    /// `|A u_mu - f|`
    pub residual: f64,
}

/// Everything the demo produces: the grid, the recovered solution at the
/// last step, and the per-step history.
#[derive(Debug, Clone)]
pub struct FredholmOutcome {
    pub grid: Vec<f64>,
    pub recovered: ComplexMatrix,
    pub steps: Vec<FredholmStep>,
    pub final_rel_error: f64,
}

/// Discretize the kernel, manufacture `f = A u_true`, and walk the
/// regularized normal equations `(A*A + mu) u_mu = A* f` down a geometric
/// `mu` schedule.
pub fn fredholm_demo(
    kernel: Kernel,
    true_solution: TrueSolution,
    grid_n: usize,
    mu0: Option<f64>,
    mu_factor: f64,
    mu_steps: usize,
) -> Result<FredholmOutcome> {
    if grid_n < 8 {
        return Err(LinalgError::InvalidOptions(format!(
            "grid must have at least 8 points, got {grid_n}"
        )));
    }
    if !(mu_factor > 0.0 && mu_factor < 1.0) {
        return Err(LinalgError::InvalidOptions(format!(
            "mu_factor must lie strictly between 0 and 1, got {mu_factor}"
        )));
    }
    if mu_steps == 0 {
        return Err(LinalgError::InvalidOptions(
            "mu_steps must be at least 1".into(),
        ));
    }

    let h = 1.0 / (grid_n - 1) as f64;
    let grid: Vec<f64> = (0..grid_n).map(|i| i as f64 * h).collect();
    let weight = |j: usize| {
        if j == 0 || j == grid_n - 1 {
            h / 2.0
        } else {
            h
        }
    };
    let a = ComplexMatrix::from_fn(grid_n, grid_n, |i, j| {
        Complex64::new(weight(j) * kernel.eval(grid[i], grid[j]), 0.0)
    });
    let u_true = ComplexMatrix::from_fn(grid_n, 1, |i, _| {
        Complex64::new(true_solution.eval(grid[i]), 0.0)
    });
    let f = &a * &u_true;

    let adj = a.adjoint();
    let (gram_hi, gram_lo) = matmul_compensated(&adj, &a)?;
    let rhs = &adj * &f;

    let norm_a = a.frobenius_norm();
    let norm_u = u_true.frobenius_norm();
    let mut mu = mu0.unwrap_or(tol::MU0_REL * norm_a * norm_a);

    let mut steps = Vec::with_capacity(mu_steps);
    let mut recovered = ComplexMatrix::zeros(grid_n, 1);
    for _ in 0..mu_steps {
        let u_mu = solve_shifted_refined(&gram_hi, &gram_lo, mu, &rhs)?;
        let err = u_mu.distance(&u_true);
        let rel_error = if norm_u > 0.0 { err / norm_u } else { err };
        let residual = (&a * &u_mu).distance(&f);
        steps.push(FredholmStep {
            mu,
            rel_error,
            residual,
        });
        recovered = u_mu;
        mu *= mu_factor;
    }
    let final_rel_error = steps.last().map(|s| s.rel_error).unwrap_or(0.0);
    Ok(FredholmOutcome {
        grid,
        recovered,
        steps,
        final_rel_error,
    })
}
