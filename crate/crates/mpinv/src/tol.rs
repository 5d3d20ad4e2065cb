//! Default tolerances, collected in one place.
//!
//! The underlying theory is exact-arithmetic; every floating-point
//! realization of an "is zero" or "are equal" decision needs an explicit
//! threshold. All thresholds are relative to a problem scale so behavior is
//! invariant under `A -> z*A`.

/// Pivot threshold for Gaussian elimination, relative to the largest initial
/// absolute row sum. Pivots at or below it report `SingularMatrix`.
pub const PIVOT_REL: f64 = 1e-12;

/// Off-diagonal Frobenius mass (relative to the input norm) at which the
/// cyclic Jacobi iteration stops. Comfortably above the n*eps rounding floor
/// for the sizes this crate targets (n <= ~100).
pub const EIG_OFF_DIAG: f64 = 1e-13;

/// Jacobi sweep cap; quadratic convergence means typical inputs finish in
/// well under ten sweeps.
pub const MAX_SWEEPS: usize = 64;

/// Accepted relative deviation `|H - H*| / |H|` for a matrix passed to the
/// Hermitian eigensolver.
pub const HERMITIAN_REL: f64 = 1e-10;

/// Eigenvalue clustering width, applied as `CLUSTER_REL * max(1, |lambda_1|)`.
/// Consecutive sorted eigenvalues closer than this are treated as one
/// multiple eigenvalue.
pub const CLUSTER_REL: f64 = 1e-8;

/// Negative eigenvalues of a provably PSD matrix (a Gram matrix) within
/// `PSD_CLAMP_REL * |H|` of zero are rounding artifacts and get clamped to 0;
/// anything more negative is a genuine failure.
pub const PSD_CLAMP_REL: f64 = 1e-10;

/// Default rank threshold: Gram eigenvalues (or singular values, in the SVD
/// route) at or below `RANK_REL * largest` count as zero.
pub const RANK_REL: f64 = 1e-10;

/// Minimal separation between distinct eigenvalues accepted by the
/// polynomial projector formula, relative to the largest eigenvalue. The
/// Lagrange weights `1/(b_i - b_j)` amplify eigenvalue error without bound
/// as the gap closes.
pub const SEP_REL: f64 = 1e-6;

/// Relative evaluation error the polynomial route tolerates before
/// refusing. The Lagrange matrix products pass through intermediates of
/// magnitude `prod |G - b_l| / |b_b - b_l|`; once that growth times machine
/// epsilon exceeds this bound, the route reports the spectrum as unusable
/// instead of returning rounding noise. Calibrated so accepted spectra keep
/// the Penrose residuals one to two orders below the 1e-9 acceptance line.
pub const POLY_ERR_REL: f64 = 1e-11;

/// Default regularization start `mu_0 = MU0_REL * |A|_F^2`, keeping the
/// shifted Gram matrix well conditioned on the first solve.
pub const MU0_REL: f64 = 1e-2;

/// Default geometric decay factor of the regularization schedule.
pub const MU_FACTOR: f64 = 0.1;

/// Default length cap of the regularization schedule.
pub const MU_MAX_STEPS: usize = 12;

/// Default stop rule for the regularized iteration: successive iterates
/// closer than `CONV_REL * |X_k|` in Frobenius norm.
pub const CONV_REL: f64 = 1e-10;

/// Characteristic polynomials are only computed up to this matrix side;
/// coefficient growth destroys accuracy beyond it.
pub const CHAR_POLY_MAX: usize = 30;

/// Default acceptance threshold for the four Penrose residuals, relative to
/// `max(1, |A|_F, |B|_F)`.
pub const ACCEPT_REL: f64 = 1e-9;

/// Residuals at or below `EXACT_RHS_REL * max(1, |y|)` mark a least-squares
/// problem as exactly solvable (the right-hand side lies in the range).
pub const EXACT_RHS_REL: f64 = 1e-9;
