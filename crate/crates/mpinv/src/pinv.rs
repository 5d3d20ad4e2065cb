//! The Moore-Penrose pseudoinverse by four independent routes, plus the
//! closed forms for full-rank input.
//!
//! A matrix `B` is *the* pseudoinverse of `A` when `ABA = A`, `BAB = B` and
//! both `AB` and `BA` are self-adjoint; those four conditions pin `B`
//! uniquely, which is why the independent routes below must agree and why
//! [`verify_penrose`] can certify any candidate.
//!
//! Routes, in the order the auto dispatcher tries them:
//!
//! * **fullrank**: the closed forms `A*(AA*)^-1` / `(A*A)^-1 A*`, valid
//!   when the chosen Gram matrix is invertible; cheapest, fails loudly on
//!   rank deficiency.
//! * **spectral**: eigendecompose a Gram matrix and sum `(1/a) A* E_a`
//!   over its nonzero eigenvalues; works for every matrix.
//! * **polynomial**: the same sum with every projector replaced by a
//!   Lagrange polynomial in the Gram matrix, so only eigenvalues are
//!   needed; rejects clustered spectra where the weights blow up.
//! * **tikhonov**: the regularized limit `A*(AA* + mu)^-1` followed down a
//!   geometric `mu` schedule until successive iterates agree.
//! * **svd**: `W S^+ V*` from the singular value decomposition, with
//!   rectangles passing through the square embedding.

use num_complex::Complex64;
use serde::Serialize;

use crate::decomp;
use crate::eigen::{self, SpectralDecomposition};
use crate::error::{LinalgError, Result};
use crate::matrix::{solve_linear, ComplexMatrix};
use crate::tol;

/// Which Gram matrix a closed-form route works with: `Rows` means the
/// `m x m` matrix `AA*`, `Cols` the `n x n` matrix `A*A`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GramSide {
    Rows,
    Cols,
}

/// Route selector for [`pinv`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Route {
    #[default]
    Auto,
    Spectral,
    Polynomial,
    Tikhonov,
    Svd,
    Fullrank,
}

/// Knobs for [`pinv`] and the individual routes.
///
/// `rank_tol` is relative to the largest Gram eigenvalue (largest singular
/// value in the SVD route). `mu0 = None` starts the regularization schedule
/// at `MU0_REL * |A|_F^2`.
#[derive(Debug, Clone)]
pub struct PinvOptions {
    pub route: Route,
    pub rank_tol: f64,
    pub mu0: Option<f64>,
    pub mu_factor: f64,
    pub mu_max_steps: usize,
    pub conv_tol: f64,
}

impl Default for PinvOptions {
    fn default() -> Self {
        PinvOptions {
            route: Route::Auto,
            rank_tol: tol::RANK_REL,
            mu0: None,
            mu_factor: tol::MU_FACTOR,
            mu_max_steps: tol::MU_MAX_STEPS,
            conv_tol: tol::CONV_REL,
        }
    }
}

impl PinvOptions {
    fn validate(&self) -> Result<()> {
        // NaN must fail every check, so the comparisons are phrased to
        // reject it explicitly.
        if self.rank_tol.is_nan() || self.rank_tol <= 0.0 {
            return Err(LinalgError::InvalidOptions(format!(
                "rank_tol must be positive, got {}",
                self.rank_tol
            )));
        }
        if self.mu_factor.is_nan() || self.mu_factor <= 0.0 || self.mu_factor >= 1.0 {
            return Err(LinalgError::InvalidOptions(format!(
                "mu_factor must lie strictly between 0 and 1, got {}",
                self.mu_factor
            )));
        }
        if self.mu_max_steps == 0 {
            return Err(LinalgError::InvalidOptions(
                "mu_max_steps must be at least 1".into(),
            ));
        }
        if let Some(mu0) = self.mu0 {
            if !mu0.is_finite() || mu0 <= 0.0 {
                return Err(LinalgError::InvalidOptions(format!(
                    "mu0 must be positive and finite, got {mu0}"
                )));
            }
        }
        if self.conv_tol.is_nan() || self.conv_tol <= 0.0 {
            return Err(LinalgError::InvalidOptions(format!(
                "conv_tol must be positive, got {}",
                self.conv_tol
            )));
        }
        Ok(())
    }
}

/// The four Penrose residuals of a candidate pair `(A, B)`:
/// `r1 = |ABA - A|`, `r2 = |BAB - B|`, `r3 = |AB - (AB)*|`,
/// `r4 = |BA - (BA)*|`, with `scale = max(1, |A|_F, |B|_F)`.
#[derive(Debug, Clone, Serialize)]
pub struct PenroseReport {
    pub r1: f64,
    pub r2: f64,
    pub r3: f64,
    pub r4: f64,
    pub scale: f64,
}

impl PenroseReport {
    /// Largest of the four residuals.
    pub fn max_residual(&self) -> f64 {
        self.r1.max(self.r2).max(self.r3).max(self.r4)
    }

    /// All four residuals at or below `tol * scale`.
    pub fn within(&self, tol: f64) -> bool {
        self.max_residual() <= tol * self.scale
    }
}

/// Output of the dispatching front door [`pinv`].
#[derive(Debug, Clone)]
pub struct PinvResult {
    pub pinv: ComplexMatrix,
    pub route_used: &'static str,
    pub report: PenroseReport,
}

/// One step of the regularized iteration: the iterate
/// `X(mu) = A*(AA* + mu)^-1` and its `mu`.
#[derive(Debug, Clone)]
pub struct TikhonovIterate {
    pub mu: f64,
    pub approx: ComplexMatrix,
}

/// The whole regularization path, plus whether the stop rule fired before
/// the schedule ran out.
#[derive(Debug, Clone)]
pub struct TikhonovPath {
    pub steps: Vec<TikhonovIterate>,
    pub converged: bool,
}

fn zero_pinv(a: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::zeros(a.cols(), a.rows())
}

/// Spectral decomposition of the requested Gram matrix, with the PSD clamp
/// applied.
fn gram_spectral(a: &ComplexMatrix, side: GramSide) -> Result<SpectralDecomposition> {
    let gram = match side {
        GramSide::Rows => a * &a.adjoint(),
        GramSide::Cols => &a.adjoint() * a,
    };
    let mut eig = eigen::hermitian_eig(&gram, tol::EIG_OFF_DIAG)?;
    eig.clamp_psd(gram.frobenius_norm())?;
    Ok(eigen::spectral_projectors(&eig, tol::CLUSTER_REL))
}

/// Sum `(1/alpha) E_a` over the eigenvalues above the rank threshold.
fn inverted_projector_sum(sd: &SpectralDecomposition, rank_tol: f64) -> ComplexMatrix {
    let dim = sd.dim();
    let cut = rank_tol * sd.distinct_values.first().copied().unwrap_or(0.0);
    let mut acc = ComplexMatrix::zeros(dim, dim);
    for (alpha, e) in sd.distinct_values.iter().zip(&sd.projectors) {
        if *alpha > cut {
            acc = &acc + &e.scale(Complex64::new(1.0 / alpha, 0.0));
        }
    }
    acc
}

/// Pseudoinverse from the spectral representation of `AA*`:
/// sum of `(1/alpha_a) A* E_a` over the nonzero eigenvalues.
pub fn pinv_spectral(a: &ComplexMatrix, rank_tol: f64) -> Result<ComplexMatrix> {
    if a.is_zero() {
        return Ok(zero_pinv(a));
    }
    let sd = gram_spectral(a, GramSide::Rows)?;
    Ok(&a.adjoint() * &inverted_projector_sum(&sd, rank_tol))
}

/// Mirror of [`pinv_spectral`] on the spectral representation of `A*A`:
/// sum of `(1/beta_b) F_b A*`.
pub fn pinv_spectral_cols(a: &ComplexMatrix, rank_tol: f64) -> Result<ComplexMatrix> {
    if a.is_zero() {
        return Ok(zero_pinv(a));
    }
    let sd = gram_spectral(a, GramSide::Cols)?;
    Ok(&inverted_projector_sum(&sd, rank_tol) * &a.adjoint())
}

/// Pseudoinverse of a Hermitian matrix straight from its own spectral
/// decomposition: the sum of `(1/lambda_a) E_a` over eigenvalues with
/// `|lambda_a|` above `rank_tol` times the largest magnitude.
///
/// For Hermitian input this is the accurate evaluation; the general
/// routes would form the Gram matrix `H H* = H^2` and square the condition
/// number for nothing.
pub fn pinv_hermitian(h: &ComplexMatrix, rank_tol: f64) -> Result<ComplexMatrix> {
    if h.is_zero() {
        return Ok(zero_pinv(h));
    }
    let eig = eigen::hermitian_eig(h, tol::EIG_OFF_DIAG)?;
    let sd = eigen::spectral_projectors(&eig, tol::CLUSTER_REL);
    let max_abs = sd
        .distinct_values
        .iter()
        .fold(0.0_f64, |acc, v| acc.max(v.abs()));
    let cut = rank_tol * max_abs;
    let n = h.rows();
    let mut acc = ComplexMatrix::zeros(n, n);
    for (lambda, e) in sd.distinct_values.iter().zip(&sd.projectors) {
        if lambda.abs() > cut {
            acc = &acc + &e.scale(Complex64::new(1.0 / lambda, 0.0));
        }
    }
    Ok(acc)
}

/// Distinct clamped eigenvalues of the chosen Gram matrix, checked for the
/// separation the Lagrange weights need: pairwise gaps above `SEP_REL`
/// times the largest eigenvalue, and a total evaluation amplification
/// (the product of factor norm over node gap) small enough that rounding
/// stays below `POLY_ERR_REL`.
fn separated_gram_spectrum(a: &ComplexMatrix, side: GramSide) -> Result<Vec<f64>> {
    let gram = match side {
        GramSide::Rows => a * &a.adjoint(),
        GramSide::Cols => &a.adjoint() * a,
    };
    let mut eig = eigen::hermitian_eig(&gram, tol::EIG_OFF_DIAG)?;
    eig.clamp_psd(gram.frobenius_norm())?;
    let (distinct, _) = eigen::distinct_spectrum(&eig.eigenvalues, tol::CLUSTER_REL);
    let sep = tol::SEP_REL * distinct[0].abs();
    for i in 0..distinct.len() {
        for j in i + 1..distinct.len() {
            let gap = (distinct[i] - distinct[j]).abs();
            if gap <= sep {
                return Err(LinalgError::DegenerateSeparation {
                    a: distinct[i],
                    b: distinct[j],
                    gap,
                    tol: sep,
                });
            }
        }
    }
    let beta_max = distinct[0];
    let mut amplification = 1.0_f64;
    for (b, &beta_b) in distinct.iter().enumerate() {
        let mut log_amp = 0.0_f64;
        for (l, &beta_l) in distinct.iter().enumerate() {
            if l == b {
                continue;
            }
            let factor_norm = (beta_max - beta_l).max(beta_l).max(f64::MIN_POSITIVE);
            log_amp += (factor_norm / (beta_b - beta_l).abs()).ln();
        }
        amplification = amplification.max(log_amp.exp());
    }
    let cap = tol::POLY_ERR_REL / f64::EPSILON;
    if amplification > cap {
        return Err(LinalgError::LagrangeAmplification {
            amplification,
            cap,
        });
    }
    Ok(distinct)
}

/// Pure-polynomial pseudoinverse on the `A*A` side: needs only the distinct
/// eigenvalues `beta_b`, evaluating
/// `sum_{beta_b != 0} (1/beta_b) prod_{l != b} (beta_b - beta_l)^-1
///  [prod_{l != b} (A*A - beta_l 1)] A*`
/// by repeated multiplication. Fails with `DegenerateSeparation` when two
/// distinct eigenvalues sit closer than `SEP_REL` times the largest; fall
/// back to [`pinv_spectral`] in that case.
pub fn pinv_polynomial(a: &ComplexMatrix, rank_tol: f64) -> Result<ComplexMatrix> {
    if a.is_zero() {
        return Ok(zero_pinv(a));
    }
    let beta = separated_gram_spectrum(a, GramSide::Cols)?;
    let gram = &a.adjoint() * a;
    let acc = lagrange_inverse_sum(&gram, &beta, rank_tol);
    Ok(&acc * &a.adjoint())
}

/// Mirror of [`pinv_polynomial`] on the `AA*` side.
pub fn pinv_polynomial_rows(a: &ComplexMatrix, rank_tol: f64) -> Result<ComplexMatrix> {
    if a.is_zero() {
        return Ok(zero_pinv(a));
    }
    let alpha = separated_gram_spectrum(a, GramSide::Rows)?;
    let gram = a * &a.adjoint();
    let acc = lagrange_inverse_sum(&gram, &alpha, rank_tol);
    Ok(&a.adjoint() * &acc)
}

/// `sum_{b: beta_b > cut} (1/beta_b) prod_{l != b} (G - beta_l 1) /
/// (beta_b - beta_l)`, the polynomial that realizes `sum (1/beta_b) F_b`
/// without any eigenvectors.
fn lagrange_inverse_sum(gram: &ComplexMatrix, beta: &[f64], rank_tol: f64) -> ComplexMatrix {
    let n = gram.rows();
    let id = ComplexMatrix::identity(n);
    let cut = rank_tol * beta.first().copied().unwrap_or(0.0);
    let mut acc = ComplexMatrix::zeros(n, n);
    for (b, &beta_b) in beta.iter().enumerate() {
        if beta_b <= cut {
            continue;
        }
        let mut prod = id.clone();
        let mut weight = 1.0 / beta_b;
        for (l, &beta_l) in beta.iter().enumerate() {
            if l == b {
                continue;
            }
            prod = &prod * &(gram - &id.scale(Complex64::new(beta_l, 0.0)));
            weight /= beta_b - beta_l;
        }
        acc = &acc + &prod.scale(Complex64::new(weight, 0.0));
    }
    acc
}

/// Walk the geometric regularization schedule, recording
/// `X(mu) = A*(AA* + mu 1)^-1` at each step. Works on whichever Gram side
/// is smaller; the two sides agree identically for every `mu > 0`. Never
/// fails on schedule exhaustion; `converged` reports whether the stop rule
/// `|X_k - X_{k-1}| <= conv_tol |X_k|` fired.
pub fn tikhonov_iterates(a: &ComplexMatrix, opts: &PinvOptions) -> Result<TikhonovPath> {
    opts.validate()?;
    if a.is_zero() {
        return Ok(TikhonovPath {
            steps: vec![TikhonovIterate {
                mu: opts.mu0.unwrap_or(0.0),
                approx: zero_pinv(a),
            }],
            converged: true,
        });
    }
    let norm = a.frobenius_norm();
    let mu0 = opts.mu0.unwrap_or(tol::MU0_REL * norm * norm);
    let (m, n) = a.shape();
    let rows_side = m <= n;
    let adj = a.adjoint();
    // The Gram matrix is kept as a split-precision pair: rounding it to
    // plain f64 would already commit an eps*|G| error that the resolvent
    // amplifies by 1/mu on rank-deficient input.
    let (gram_hi, gram_lo) = if rows_side {
        crate::matrix::matmul_compensated(a, &adj)?
    } else {
        crate::matrix::matmul_compensated(&adj, a)?
    };

    let mut steps: Vec<TikhonovIterate> = Vec::new();
    let mut mu = mu0;
    // Below eps * |G| the shift rounds away entirely and successive
    // "iterates" coincide bit for bit without meaning anything; stop the
    // descent there.
    let mu_floor = f64::EPSILON * gram_hi.frobenius_norm();
    for _ in 0..opts.mu_max_steps {
        let approx = if rows_side {
            crate::matrix::solve_shifted_refined(&gram_hi, &gram_lo, mu, a)?.adjoint()
        } else {
            crate::matrix::solve_shifted_refined(&gram_hi, &gram_lo, mu, &adj)?
        };
        let converged = steps
            .last()
            .map(|prev| approx.distance(&prev.approx) <= opts.conv_tol * approx.frobenius_norm())
            .unwrap_or(false);
        steps.push(TikhonovIterate { mu, approx });
        if converged {
            return Ok(TikhonovPath {
                steps,
                converged: true,
            });
        }
        mu *= opts.mu_factor;
        if mu < mu_floor {
            break;
        }
    }
    Ok(TikhonovPath {
        steps,
        converged: false,
    })
}

/// Pseudoinverse as the limit of the regularized solution operator. Errors
/// with `NoConvergence` when the schedule runs out before successive
/// iterates agree to `conv_tol`.
pub fn pinv_tikhonov(a: &ComplexMatrix, opts: &PinvOptions) -> Result<ComplexMatrix> {
    let path = tikhonov_iterates(a, opts)?;
    if !path.converged {
        let last_gap = match path.steps.as_slice() {
            [.., prev, last] => prev.approx.distance(&last.approx),
            _ => f64::INFINITY,
        };
        let target = opts.conv_tol
            * path
                .steps
                .last()
                .map(|s| s.approx.frobenius_norm())
                .unwrap_or(1.0);
        return Err(LinalgError::NoConvergence {
            what: "tikhonov schedule",
            steps: path.steps.len(),
            residual: last_gap,
            target,
        });
    }
    Ok(path.steps.into_iter().last().expect("nonempty path").approx)
}

/// Pseudoinverse through the singular value decomposition: `W S^+ V*` for
/// square input, with rectangles embedded into an `(m+n)` square first and
/// the relevant block extracted per the embedding identities. Singular
/// values at or below `rank_tol * s_max` are inverted to zero.
pub fn pinv_svd(a: &ComplexMatrix, rank_tol: f64) -> Result<ComplexMatrix> {
    if a.is_square() {
        return pinv_svd_square(a, rank_tol);
    }
    let (embedded, shape) = a.embed_square();
    let square_pinv = pinv_svd_square(&embedded, rank_tol)?;
    square_pinv.extract_rect(&shape.swapped())
}

fn pinv_svd_square(a: &ComplexMatrix, rank_tol: f64) -> Result<ComplexMatrix> {
    let f = decomp::svd_square(a)?;
    let s_max = f.singular_values.first().copied().unwrap_or(0.0);
    // The zero test runs on the eigenvalue scale (sigma^2 against
    // rank_tol * sigma_max^2), the same rank decision the spectral routes
    // make; a threshold on sigma itself would sit below the sqrt(eps)
    // noise floor of Gram-derived singular values.
    let cut = rank_tol.sqrt() * s_max;
    let inverted: Vec<f64> = f
        .singular_values
        .iter()
        .map(|&s| if s > cut { 1.0 / s } else { 0.0 })
        .collect();
    Ok(&(&f.w * &ComplexMatrix::from_real_diag(&inverted)) * &f.v.adjoint())
}

/// Closed-form pseudoinverse for full-rank matrices: `A* (AA*)^-1` when the
/// row Gram matrix is invertible, `(A*A)^-1 A*` when the column one is.
/// A `SingularMatrix` error signals rank deficiency on the chosen side;
/// callers fall back to another route.
pub fn pinv_fullrank(a: &ComplexMatrix, side: GramSide) -> Result<ComplexMatrix> {
    match side {
        GramSide::Rows => {
            let gram = a * &a.adjoint();
            // A*(AA*)^-1 = ((AA*)^-1 A)^* because the Gram inverse is
            // Hermitian.
            Ok(solve_linear(&gram, a)?.adjoint())
        }
        GramSide::Cols => {
            let gram = &a.adjoint() * a;
            solve_linear(&gram, &a.adjoint())
        }
    }
}

/// Compute the four Penrose residuals of the candidate `b` and compare
/// against `tol * scale`.
pub fn verify_penrose(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    tol: f64,
) -> Result<(PenroseReport, bool)> {
    if b.rows() != a.cols() || b.cols() != a.rows() {
        return Err(LinalgError::ShapeMismatch {
            op: "verify_penrose",
            left_rows: a.rows(),
            left_cols: a.cols(),
            right_rows: b.rows(),
            right_cols: b.cols(),
        });
    }
    let ab = a.matmul(b)?;
    let ba = b.matmul(a)?;
    let report = PenroseReport {
        r1: ab.matmul(a)?.distance(a),
        r2: ba.matmul(b)?.distance(b),
        r3: ab.distance(&ab.adjoint()),
        r4: ba.distance(&ba.adjoint()),
        scale: 1.0_f64
            .max(a.frobenius_norm())
            .max(b.frobenius_norm()),
    };
    let ok = report.within(tol);
    Ok((report, ok))
}

/// Dispatching front door. `Auto` tries the closed forms first (smaller Gram
/// side, then the other), falling back to the spectral route; explicit
/// routes run as asked. Every result is verified and returned together with
/// its Penrose report.
pub fn pinv(a: &ComplexMatrix, opts: &PinvOptions) -> Result<PinvResult> {
    opts.validate()?;
    let finish = |matrix: ComplexMatrix, route_used: &'static str| -> Result<PinvResult> {
        let (report, _) = verify_penrose(a, &matrix, tol::ACCEPT_REL)?;
        Ok(PinvResult {
            pinv: matrix,
            route_used,
            report,
        })
    };

    match opts.route {
        Route::Spectral => finish(pinv_spectral(a, opts.rank_tol)?, "spectral"),
        Route::Polynomial => finish(pinv_polynomial(a, opts.rank_tol)?, "polynomial"),
        Route::Tikhonov => finish(pinv_tikhonov(a, opts)?, "tikhonov"),
        Route::Svd => finish(pinv_svd(a, opts.rank_tol)?, "svd"),
        Route::Fullrank => {
            let mut failures: Vec<String> = Vec::new();
            for (side, label) in fullrank_order(a) {
                match pinv_fullrank(a, side) {
                    Ok(matrix) => return finish(matrix, label),
                    Err(e) => failures.push(format!("{label}: {e}")),
                }
            }
            Err(LinalgError::RouteFailed {
                summary: failures.join("; "),
            })
        }
        Route::Auto => {
            let mut failures: Vec<String> = Vec::new();
            for (side, label) in fullrank_order(a) {
                match pinv_fullrank(a, side) {
                    Ok(matrix) => {
                        let (report, ok) = verify_penrose(a, &matrix, tol::ACCEPT_REL)?;
                        if ok {
                            return Ok(PinvResult {
                                pinv: matrix,
                                route_used: label,
                                report,
                            });
                        }
                        failures.push(format!(
                            "{label}: residual {:.3e} above {:.3e}",
                            report.max_residual(),
                            tol::ACCEPT_REL * report.scale
                        ));
                    }
                    Err(e) => failures.push(format!("{label}: {e}")),
                }
            }
            match pinv_spectral(a, opts.rank_tol) {
                Ok(matrix) => {
                    let (report, ok) = verify_penrose(a, &matrix, tol::ACCEPT_REL)?;
                    if ok {
                        return Ok(PinvResult {
                            pinv: matrix,
                            route_used: "spectral",
                            report,
                        });
                    }
                    failures.push(format!(
                        "spectral: residual {:.3e} above {:.3e}",
                        report.max_residual(),
                        tol::ACCEPT_REL * report.scale
                    ));
                }
                Err(e) => failures.push(format!("spectral: {e}")),
            }
            Err(LinalgError::RouteFailed {
                summary: failures.join("; "),
            })
        }
    }
}

/// Closed-form attempt order: the smaller Gram matrix first.
fn fullrank_order(a: &ComplexMatrix) -> [(GramSide, &'static str); 2] {
    if a.rows() <= a.cols() {
        [
            (GramSide::Rows, "fullrank-rows"),
            (GramSide::Cols, "fullrank-cols"),
        ]
    } else {
        [
            (GramSide::Cols, "fullrank-cols"),
            (GramSide::Rows, "fullrank-rows"),
        ]
    }
}
