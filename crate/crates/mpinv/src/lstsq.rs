//! Linear least squares through the pseudoinverse.
//!
//! The residual `|Ax - y|` attains its minimum exactly on the set
//! `{ A+ y + (1 - A+ A) z : z }`; the solver returns the minimum-norm
//! member `A+ y` together with the kernel projector `1 - A+ A` from which
//! every other minimizer is one multiply away.

use crate::error::{LinalgError, Result};
use crate::matrix::ComplexMatrix;
use crate::pinv::{self, PinvOptions};
use crate::tol;

/// Solution of `min |Ax - y|`.
///
/// `x_min` is the minimum-norm minimizer `A+ y`; `kernel_projector` is
/// `1_n - A+ A`, whose range is exactly the kernel of `A`;
/// `residual_norm = |A x_min - y|`; `exact` flags a right-hand side within
/// `EXACT_RHS_REL * max(1, |y|)` of the range of `A`.
#[derive(Debug, Clone)]
pub struct LeastSquaresSolution {
    pub x_min: ComplexMatrix,
    pub kernel_projector: ComplexMatrix,
    pub residual_norm: f64,
    pub exact: bool,
}

/// Minimize `|Ax - y|`. Multiple right-hand sides are accepted by column
/// stacking `y`; the pseudoinverse applies columnwise.
pub fn solve_least_squares(
    a: &ComplexMatrix,
    y: &ComplexMatrix,
    opts: &PinvOptions,
) -> Result<LeastSquaresSolution> {
    let ap = pinv::pinv(a, opts)?.pinv;
    solution_with_pinv(a, y, &ap)
}

/// Assemble the solution from a pseudoinverse already at hand.
pub fn solution_with_pinv(
    a: &ComplexMatrix,
    y: &ComplexMatrix,
    ap: &ComplexMatrix,
) -> Result<LeastSquaresSolution> {
    if y.rows() != a.rows() || ap.rows() != a.cols() || ap.cols() != a.rows() {
        return Err(LinalgError::ShapeMismatch {
            op: "solve_least_squares",
            left_rows: a.rows(),
            left_cols: a.cols(),
            right_rows: y.rows(),
            right_cols: y.cols(),
        });
    }
    let x_min = ap * y;
    let kernel_projector = &ComplexMatrix::identity(a.cols()) - &(ap * a);
    let residual_norm = (&(a * &x_min) - y).frobenius_norm();
    let exact = residual_norm <= tol::EXACT_RHS_REL * y.frobenius_norm().max(1.0);
    Ok(LeastSquaresSolution {
        x_min,
        kernel_projector,
        residual_norm,
        exact,
    })
}

/// Orthogonal projector `1_n - A+ A` onto the kernel of `A`.
pub fn kernel_projector(a: &ComplexMatrix, opts: &PinvOptions) -> Result<ComplexMatrix> {
    let ap = pinv::pinv(a, opts)?.pinv;
    Ok(&ComplexMatrix::identity(a.cols()) - &(&ap * a))
}

/// Orthogonal projector `1_m - A A+` onto the orthogonal complement of the
/// range of `A`.
pub fn range_complement_projector(
    a: &ComplexMatrix,
    opts: &PinvOptions,
) -> Result<ComplexMatrix> {
    let ap = pinv::pinv(a, opts)?.pinv;
    Ok(&ComplexMatrix::identity(a.rows()) - &(a * &ap))
}

/// One member of the minimizing set: `x_min + (1 - A+ A) z`. Every choice of
/// `z` leaves the residual unchanged.
pub fn minimizing_set_sample(
    sol: &LeastSquaresSolution,
    z: &ComplexMatrix,
) -> Result<ComplexMatrix> {
    if z.rows() != sol.kernel_projector.rows() || z.cols() != sol.x_min.cols() {
        return Err(LinalgError::ShapeMismatch {
            op: "minimizing_set_sample",
            left_rows: sol.x_min.rows(),
            left_cols: sol.x_min.cols(),
            right_rows: z.rows(),
            right_cols: z.cols(),
        });
    }
    sol.x_min.add(&sol.kernel_projector.matmul(z)?)
}
