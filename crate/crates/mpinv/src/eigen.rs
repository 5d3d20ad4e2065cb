//! Hermitian eigendecomposition and the spectral machinery built on it.
//!
//! The solver is a cyclic complex Jacobi iteration: unconditionally
//! convergent on Hermitian input and simple enough to audit, which is what
//! this crate needs; every Gram matrix it ever diagonalizes is Hermitian.
//! On top of it sit distinct-eigenvalue clustering, spectral projectors by
//! two independent constructions (eigenvector outer products and Lagrange
//! polynomials in the matrix), characteristic polynomials via the
//! Faddeev-LeVerrier recurrence, and the polynomial functional calculus.

use num_complex::Complex64;

use crate::error::{LinalgError, Result};
use crate::matrix::ComplexMatrix;
use crate::tol;

/// Pair ordering of the cyclic Jacobi sweep. Both visit every off-diagonal
/// pair once per sweep; exposing two orders lets tests confirm that derived
/// quantities do not depend on the order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepOrder {
    RowCyclic,
    ColumnCyclic,
}

/// Eigendecomposition of a Hermitian matrix: real eigenvalues sorted
/// descending and a unitary matrix of eigenvector columns in matching order.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub eigenvalues: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Column `k` of the eigenvector matrix as an `n x 1` matrix.
    pub fn eigenvector(&self, k: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.dim(), 1, |i, _| self.vectors.get(i, k))
    }

    /// Clamp small negative eigenvalues of a provably PSD matrix to zero.
    /// `scale` is the norm of the decomposed matrix; eigenvalues below
    /// `-PSD_CLAMP_REL * scale` are reported as a genuine PSD violation.
    pub fn clamp_psd(&mut self, scale: f64) -> Result<()> {
        let clamp = tol::PSD_CLAMP_REL * scale;
        for lambda in &mut self.eigenvalues {
            if *lambda < -clamp {
                return Err(LinalgError::NotPsd {
                    eigenvalue: *lambda,
                    tol: clamp,
                });
            }
            if *lambda < 0.0 {
                *lambda = 0.0;
            }
        }
        Ok(())
    }
}

/// Spectral decomposition into distinct eigenvalues and orthogonal spectral
/// projectors: `H = sum_a alpha_a E_a`, `sum_a E_a = 1`,
/// `E_a E_b = delta_ab E_a`.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub distinct_values: Vec<f64>,
    pub projectors: Vec<ComplexMatrix>,
    pub multiplicities: Vec<usize>,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.projectors.first().map_or(0, |p| p.rows())
    }

    /// `sum_a alpha_a E_a`, the reconstruction of the decomposed matrix.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.dim();
        let mut acc = ComplexMatrix::zeros(n, n);
        for (alpha, e) in self.distinct_values.iter().zip(&self.projectors) {
            acc = &acc + &e.scale(Complex64::new(*alpha, 0.0));
        }
        acc
    }
}

/// Monic characteristic polynomial `p(z) = det(z 1 - A)`, stored as
/// coefficients in ascending degree order: `coefficients[k]` multiplies
/// `z^k` and the top entry is exactly one.
#[derive(Debug, Clone)]
pub struct CharPoly {
    pub coefficients: Vec<Complex64>,
}

impl CharPoly {
    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// Horner evaluation at a complex point.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::ZERO;
        for c in self.coefficients.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }
}

/// Eigendecompose a Hermitian matrix with the default (row-cyclic) sweep.
///
/// `tol` is the stopping threshold: the iteration ends once the off-diagonal
/// Frobenius mass falls to `tol * |H|_F`. Fails with `NotHermitian` when
/// `|H - H*|_F > HERMITIAN_REL * |H|_F`, and with `NoConvergence` after
/// `MAX_SWEEPS` sweeps.
pub fn hermitian_eig(h: &ComplexMatrix, tol: f64) -> Result<HermitianEigen> {
    hermitian_eig_with_sweep(h, tol, SweepOrder::RowCyclic)
}

/// [`hermitian_eig`] with an explicit sweep order.
pub fn hermitian_eig_with_sweep(
    h: &ComplexMatrix,
    tol: f64,
    order: SweepOrder,
) -> Result<HermitianEigen> {
    if !h.is_square() {
        return Err(LinalgError::ShapeMismatch {
            op: "hermitian_eig",
            left_rows: h.rows(),
            left_cols: h.cols(),
            right_rows: h.cols(),
            right_cols: h.rows(),
        });
    }
    let n = h.rows();
    let norm = h.frobenius_norm();
    let deviation = h.hermitian_deviation();
    if deviation > tol::HERMITIAN_REL * norm.max(f64::MIN_POSITIVE) {
        return Err(LinalgError::NotHermitian {
            deviation: if norm > 0.0 { deviation / norm } else { deviation },
            tol: tol::HERMITIAN_REL,
        });
    }

    // Work on the Hermitian part so the update formulas hold exactly.
    let idx = |i: usize, j: usize| i * n + j;
    let mut a: Vec<Complex64> = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            a.push((h.get(i, j) + h.get(j, i).conj()) * 0.5);
        }
    }
    for i in 0..n {
        a[idx(i, i)] = Complex64::new(a[idx(i, i)].re, 0.0);
    }
    let mut v: Vec<Complex64> = vec![Complex64::ZERO; n * n];
    for i in 0..n {
        v[idx(i, i)] = Complex64::ONE;
    }

    let target = tol * norm;
    let off_mass = |a: &[Complex64]| -> f64 {
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    acc += a[idx(i, j)].norm_sqr();
                }
            }
        }
        acc.sqrt()
    };

    let pairs: Vec<(usize, usize)> = match order {
        SweepOrder::RowCyclic => (0..n)
            .flat_map(|p| (p + 1..n).map(move |q| (p, q)))
            .collect(),
        SweepOrder::ColumnCyclic => (1..n)
            .flat_map(|q| (0..q).map(move |p| (p, q)))
            .collect(),
    };

    let mut remaining = off_mass(&a);
    let mut sweeps = 0;
    while remaining > target {
        if sweeps >= tol::MAX_SWEEPS {
            return Err(LinalgError::NoConvergence {
                what: "jacobi eigensolver",
                steps: sweeps,
                residual: remaining,
                target,
            });
        }
        for &(p, q) in &pairs {
            let b = a[idx(p, q)];
            let abs_b = b.norm();
            if abs_b <= f64::MIN_POSITIVE {
                continue;
            }
            let phase = b / abs_b;
            let app = a[idx(p, p)].re;
            let aqq = a[idx(q, q)].re;
            let tau = (app - aqq) / (2.0 * abs_b);
            let t = if tau >= 0.0 {
                1.0 / (tau + (tau * tau + 1.0).sqrt())
            } else {
                -1.0 / (-tau + (tau * tau + 1.0).sqrt())
            };
            let c = 1.0 / (t * t + 1.0).sqrt();
            let s = t * c;

            // Unitary rotation in the (p, q) plane:
            //   U[p][p] = c, U[p][q] = -s*phase, U[q][p] = s*conj(phase),
            //   U[q][q] = c; update A <- U* A U, V <- V U.
            for k in 0..n {
                if k == p || k == q {
                    continue;
                }
                let akp = a[idx(k, p)];
                let akq = a[idx(k, q)];
                let new_kp = akp * c + akq * s * phase.conj();
                let new_kq = -akp * s * phase + akq * c;
                a[idx(k, p)] = new_kp;
                a[idx(p, k)] = new_kp.conj();
                a[idx(k, q)] = new_kq;
                a[idx(q, k)] = new_kq.conj();
            }
            a[idx(p, p)] = Complex64::new(app * c * c + 2.0 * abs_b * c * s + aqq * s * s, 0.0);
            a[idx(q, q)] = Complex64::new(app * s * s - 2.0 * abs_b * c * s + aqq * c * c, 0.0);
            a[idx(p, q)] = Complex64::ZERO;
            a[idx(q, p)] = Complex64::ZERO;

            for k in 0..n {
                let vkp = v[idx(k, p)];
                let vkq = v[idx(k, q)];
                v[idx(k, p)] = vkp * c + vkq * s * phase.conj();
                v[idx(k, q)] = -vkp * s * phase + vkq * c;
            }
        }
        sweeps += 1;
        remaining = off_mass(&a);
    }

    // Sort descending; the stable sort keeps Jacobi output order on ties.
    let mut order_idx: Vec<usize> = (0..n).collect();
    order_idx.sort_by(|&i, &j| {
        a[idx(j, j)]
            .re
            .partial_cmp(&a[idx(i, i)].re)
            .expect("finite eigenvalues")
    });
    let eigenvalues: Vec<f64> = order_idx.iter().map(|&k| a[idx(k, k)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| v[idx(i, order_idx[j])]);

    Ok(HermitianEigen {
        eigenvalues,
        vectors,
    })
}

/// Merge a descending eigenvalue list into distinct values with
/// multiplicities. Consecutive values closer than
/// `cluster_tol * max(1, |lambda_1|)` join one cluster whose value is the
/// multiplicity-weighted mean of its members.
pub fn distinct_spectrum(eigenvalues: &[f64], cluster_tol: f64) -> (Vec<f64>, Vec<usize>) {
    assert!(
        eigenvalues.windows(2).all(|w| w[0] >= w[1]),
        "distinct_spectrum: input must be sorted descending"
    );
    let mut distinct = Vec::new();
    let mut mults = Vec::new();
    if eigenvalues.is_empty() {
        return (distinct, mults);
    }
    let width = cluster_tol * eigenvalues[0].abs().max(1.0);
    let mut sum = eigenvalues[0];
    let mut count = 1usize;
    let mut last = eigenvalues[0];
    for &lambda in &eigenvalues[1..] {
        if (last - lambda).abs() <= width {
            sum += lambda;
            count += 1;
        } else {
            distinct.push(sum / count as f64);
            mults.push(count);
            sum = lambda;
            count = 1;
        }
        last = lambda;
    }
    distinct.push(sum / count as f64);
    mults.push(count);
    (distinct, mults)
}

/// Spectral projectors from an eigendecomposition: each distinct eigenvalue
/// gets `E_a = sum_k v_k v_k*` over the eigenvector columns of its cluster.
pub fn spectral_projectors(
    eig: &HermitianEigen,
    cluster_tol: f64,
) -> SpectralDecomposition {
    let n = eig.dim();
    let (distinct_values, multiplicities) = distinct_spectrum(&eig.eigenvalues, cluster_tol);
    let mut projectors = Vec::with_capacity(distinct_values.len());
    let mut start = 0usize;
    for &mult in &multiplicities {
        let cols = start..start + mult;
        let e = ComplexMatrix::from_fn(n, n, |i, j| {
            let mut acc = Complex64::ZERO;
            for k in cols.clone() {
                acc += eig.vectors.get(i, k) * eig.vectors.get(j, k).conj();
            }
            acc
        });
        projectors.push(e);
        start += mult;
    }
    SpectralDecomposition {
        distinct_values,
        projectors,
        multiplicities,
    }
}

/// Spectral projectors evaluated as Lagrange polynomials in the matrix:
/// `E_j = prod_{l != j} (A - alpha_l 1) / (alpha_j - alpha_l)`.
///
/// Needs nothing but the distinct spectrum, which the caller supplies; `A`
/// must be diagonalizable with exactly those eigenvalues. With a single
/// distinct eigenvalue the empty product gives `E_1 = 1`. Values closer than
/// `sep_tol` make the weights blow up and are rejected.
pub fn projectors_by_polynomial(
    a: &ComplexMatrix,
    distinct_values: &[f64],
    sep_tol: f64,
) -> Result<Vec<ComplexMatrix>> {
    if !a.is_square() {
        return Err(LinalgError::ShapeMismatch {
            op: "projectors_by_polynomial",
            left_rows: a.rows(),
            left_cols: a.cols(),
            right_rows: a.cols(),
            right_cols: a.rows(),
        });
    }
    let r = distinct_values.len();
    for i in 0..r {
        for j in i + 1..r {
            let gap = (distinct_values[i] - distinct_values[j]).abs();
            if gap <= sep_tol {
                return Err(LinalgError::DegenerateSeparation {
                    a: distinct_values[i],
                    b: distinct_values[j],
                    gap,
                    tol: sep_tol,
                });
            }
        }
    }
    let n = a.rows();
    let id = ComplexMatrix::identity(n);
    let mut out = Vec::with_capacity(r);
    for j in 0..r {
        let mut prod = id.clone();
        let mut weight = Complex64::ONE;
        for (l, &alpha_l) in distinct_values.iter().enumerate() {
            if l == j {
                continue;
            }
            let shifted = a - &id.scale(Complex64::new(alpha_l, 0.0));
            prod = &prod * &shifted;
            weight /= Complex64::new(distinct_values[j] - alpha_l, 0.0);
        }
        out.push(prod.scale(weight));
    }
    Ok(out)
}

/// Monic characteristic polynomial by the Faddeev-LeVerrier recurrence.
/// Exact on integer matrices; capped at `CHAR_POLY_MAX` because coefficient
/// growth erodes accuracy with size.
pub fn char_poly(a: &ComplexMatrix) -> Result<CharPoly> {
    if !a.is_square() {
        return Err(LinalgError::ShapeMismatch {
            op: "char_poly",
            left_rows: a.rows(),
            left_cols: a.cols(),
            right_rows: a.cols(),
            right_cols: a.rows(),
        });
    }
    let n = a.rows();
    if n > tol::CHAR_POLY_MAX {
        return Err(LinalgError::CharPolyTooLarge {
            size: n,
            cap: tol::CHAR_POLY_MAX,
        });
    }
    let trace = |m: &ComplexMatrix| -> Complex64 { (0..n).map(|i| m.get(i, i)).sum() };

    let mut coefficients = vec![Complex64::ZERO; n + 1];
    coefficients[n] = Complex64::ONE;
    let mut m = a.clone();
    coefficients[n - 1] = -trace(&m);
    for k in 2..=n {
        let shifted = &m + &ComplexMatrix::identity(n).scale(coefficients[n - k + 1]);
        m = a * &shifted;
        coefficients[n - k] = -trace(&m) / (k as f64);
    }
    Ok(CharPoly { coefficients })
}

/// Functional calculus: `p(A) = sum_a p(alpha_a) E_a` from a spectral
/// decomposition, with `p` given by ascending coefficients.
pub fn apply_poly(decomp: &SpectralDecomposition, coefficients: &[Complex64]) -> ComplexMatrix {
    let n = decomp.dim();
    let mut acc = ComplexMatrix::zeros(n, n);
    for (alpha, e) in decomp.distinct_values.iter().zip(&decomp.projectors) {
        let mut value = Complex64::ZERO;
        for c in coefficients.iter().rev() {
            value = value * alpha + c;
        }
        acc = &acc + &e.scale(value);
    }
    acc
}
