use thiserror::Error;

/// Errors raised by the numerical core.
///
/// Every failure mode carries the numbers that triggered it so callers can
/// decide whether to retry with different tolerances or fall back to another
/// route.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("{op}: shape mismatch between {left_rows}x{left_cols} and {right_rows}x{right_cols}")]
    ShapeMismatch {
        op: &'static str,
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },

    #[error("matrix dimensions must be positive, got {rows}x{cols}")]
    EmptyShape { rows: usize, cols: usize },

    #[error("entry buffer holds {got} scalars but a {rows}x{cols} matrix needs {expected}")]
    BadEntryCount {
        rows: usize,
        cols: usize,
        got: usize,
        expected: usize,
    },

    #[error("non-finite entry at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },

    #[error("singular matrix: pivot modulus {pivot:.3e} at or below tolerance {tol:.3e} in elimination step {step}")]
    SingularMatrix { pivot: f64, tol: f64, step: usize },

    #[error("matrix is not Hermitian: relative deviation {deviation:.3e} exceeds {tol:.3e}")]
    NotHermitian { deviation: f64, tol: f64 },

    #[error("{what} did not converge after {steps} steps: residual {residual:.3e}, target {target:.3e}")]
    NoConvergence {
        what: &'static str,
        steps: usize,
        residual: f64,
        target: f64,
    },

    #[error("eigenvalues {a:.9e} and {b:.9e} are separated by {gap:.3e}, at or below {tol:.3e}")]
    DegenerateSeparation { a: f64, b: f64, gap: f64, tol: f64 },

    #[error("Lagrange evaluation over this spectrum would amplify rounding by {amplification:.3e} (cap {cap:.3e})")]
    LagrangeAmplification { amplification: f64, cap: f64 },

    #[error("matrix is not positive semidefinite: eigenvalue {eigenvalue:.6e} below -{tol:.3e}")]
    NotPsd { eigenvalue: f64, tol: f64 },

    #[error("matrix side {size} exceeds the characteristic-polynomial cap {cap}")]
    CharPolyTooLarge { size: usize, cap: usize },

    #[error("invalid options: {0}")]
    InvalidOptions(String),

    #[error("all pseudoinverse routes failed: {summary}")]
    RouteFailed { summary: String },
}

pub type Result<T> = std::result::Result<T, LinalgError>;
