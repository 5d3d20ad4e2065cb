//! Dense complex matrices with exact-shape arithmetic.
//!
//! Row-major storage, `Complex64` scalars, immutable after construction.
//! Besides the usual arithmetic this module provides the
//! rectangular-to-square embedding `A -> (A 0; 0 0)` together with its exact
//! block extraction, and a partially pivoted linear solver.

use num_complex::Complex64;

use crate::error::{LinalgError, Result};
use crate::tol;

/// Shorthand complex constructor.
#[inline]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Dimensions of the original rectangle recorded alongside an
/// `(m+n) x (m+n)` embedded matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EmbeddingShape {
    pub m: usize,
    pub n: usize,
}

impl EmbeddingShape {
    /// Side length of the embedded square matrix.
    pub fn side(&self) -> usize {
        self.m + self.n
    }

    /// The shape with roles of rows and columns exchanged; extracting with
    /// the swapped shape reads the `n x m` block that holds the
    /// pseudoinverse of the original rectangle.
    pub fn swapped(&self) -> EmbeddingShape {
        EmbeddingShape {
            m: self.n,
            n: self.m,
        }
    }
}

/// Dense `m x n` complex matrix. All entries are finite; dimensions are
/// positive. Values are immutable once constructed.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl std::fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.4e}{:+.4e}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl ComplexMatrix {
    /// Construct from a row-major entry buffer. Rejects empty shapes, length
    /// mismatches and non-finite entries.
    pub fn new(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(LinalgError::EmptyShape { rows, cols });
        }
        let expected = rows * cols;
        if entries.len() != expected {
            return Err(LinalgError::BadEntryCount {
                rows,
                cols,
                got: entries.len(),
                expected,
            });
        }
        for (k, z) in entries.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(LinalgError::NonFinite {
                    row: k / cols,
                    col: k % cols,
                });
            }
        }
        Ok(ComplexMatrix {
            rows,
            cols,
            entries,
        })
    }

    /// Build a matrix entry by entry. Dimensions must be positive; the
    /// closure is trusted to produce finite values (checked in debug builds).
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let z = f(i, j);
                debug_assert!(
                    z.re.is_finite() && z.im.is_finite(),
                    "non-finite entry produced at ({i}, {j})"
                );
                entries.push(z);
            }
        }
        ComplexMatrix {
            rows,
            cols,
            entries,
        }
    }

    /// Convenience constructor from rows of `(re, im)` pairs.
    pub fn from_rows(rows: &[Vec<(f64, f64)>]) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, |r| r.len());
        for (i, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(LinalgError::BadEntryCount {
                    rows: m,
                    cols: n,
                    got: i * n + r.len(),
                    expected: m * n,
                });
            }
        }
        let entries = rows
            .iter()
            .flat_map(|r| r.iter().map(|&(re, im)| c64(re, im)))
            .collect();
        ComplexMatrix::new(m, n, entries)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| Complex64::ZERO)
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::ONE
            } else {
                Complex64::ZERO
            }
        })
    }

    /// Square diagonal matrix from real diagonal entries.
    pub fn from_real_diag(diag: &[f64]) -> Self {
        Self::from_fn(diag.len(), diag.len(), |i, j| {
            if i == j {
                c64(diag[i], 0.0)
            } else {
                Complex64::ZERO
            }
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// True when every entry is exactly zero.
    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.cols + j]
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    /// Checked matrix product.
    pub fn matmul(&self, rhs: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.cols != rhs.rows {
            return Err(self.shape_err("matmul", rhs));
        }
        let (m, k, n) = (self.rows, self.cols, rhs.cols);
        let mut entries = vec![Complex64::ZERO; m * n];
        for i in 0..m {
            for p in 0..k {
                let a = self.entries[i * k + p];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let row = &rhs.entries[p * n..(p + 1) * n];
                let out = &mut entries[i * n..(i + 1) * n];
                for j in 0..n {
                    out[j] += a * row[j];
                }
            }
        }
        ComplexMatrix::new(m, n, entries)
    }

    /// Checked entrywise sum.
    pub fn add(&self, rhs: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.shape() != rhs.shape() {
            return Err(self.shape_err("add", rhs));
        }
        Ok(ComplexMatrix::from_fn(self.rows, self.cols, |i, j| {
            self.get(i, j) + rhs.get(i, j)
        }))
    }

    /// Checked entrywise difference.
    pub fn sub(&self, rhs: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.shape() != rhs.shape() {
            return Err(self.shape_err("sub", rhs));
        }
        Ok(ComplexMatrix::from_fn(self.rows, self.cols, |i, j| {
            self.get(i, j) - rhs.get(i, j)
        }))
    }

    pub fn scale(&self, z: Complex64) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.rows, self.cols, |i, j| z * self.get(i, j))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Frobenius norm of `self - rhs`; panics on shape mismatch.
    pub fn distance(&self, rhs: &ComplexMatrix) -> f64 {
        assert_eq!(self.shape(), rhs.shape(), "distance: shape mismatch");
        self.entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Frobenius norm of `self - self*` (zero exactly when Hermitian).
    pub fn hermitian_deviation(&self) -> f64 {
        assert!(self.is_square(), "hermitian_deviation: matrix not square");
        let mut acc = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                acc += (self.get(i, j) - self.get(j, i).conj()).norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// Embed an `m x n` rectangle as the top-left block of an
    /// `(m+n) x (m+n)` square, all other blocks zero. The embedding is a
    /// plain block copy; the selection matrices it realizes are never
    /// materialized.
    pub fn embed_square(&self) -> (ComplexMatrix, EmbeddingShape) {
        let shape = EmbeddingShape {
            m: self.rows,
            n: self.cols,
        };
        let side = shape.side();
        let embedded = ComplexMatrix::from_fn(side, side, |i, j| {
            if i < self.rows && j < self.cols {
                self.get(i, j)
            } else {
                Complex64::ZERO
            }
        });
        (embedded, shape)
    }

    /// Read the top-left `shape.m x shape.n` block back out of an embedded
    /// square matrix.
    pub fn extract_rect(&self, shape: &EmbeddingShape) -> Result<ComplexMatrix> {
        if self.rows != shape.side() || self.cols != shape.side() {
            return Err(LinalgError::ShapeMismatch {
                op: "extract_rect",
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: shape.side(),
                right_cols: shape.side(),
            });
        }
        Ok(ComplexMatrix::from_fn(shape.m, shape.n, |i, j| {
            self.get(i, j)
        }))
    }

    fn shape_err(&self, op: &'static str, rhs: &ComplexMatrix) -> LinalgError {
        LinalgError::ShapeMismatch {
            op,
            left_rows: self.rows,
            left_cols: self.cols,
            right_rows: rhs.rows,
            right_cols: rhs.cols,
        }
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.entries[i * self.cols + j]
    }
}

// Operator sugar for internal composition; panics on shape mismatch, use the
// checked methods at API boundaries.
impl std::ops::Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs).expect("operator *: conformable shapes")
    }
}

impl std::ops::Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.add(rhs).expect("operator +: equal shapes")
    }
}

impl std::ops::Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix::sub(self, rhs).expect("operator -: equal shapes")
    }
}

/// Scalar product `<u, v> = sum conj(u_k) v_k` of two column vectors,
/// antilinear in the first argument.
pub fn inner_product(u: &ComplexMatrix, v: &ComplexMatrix) -> Result<Complex64> {
    if u.cols != 1 || v.cols != 1 || u.rows != v.rows {
        return Err(LinalgError::ShapeMismatch {
            op: "inner_product",
            left_rows: u.rows,
            left_cols: u.cols,
            right_rows: v.rows,
            right_cols: v.cols,
        });
    }
    Ok(u.entries
        .iter()
        .zip(&v.entries)
        .map(|(a, b)| a.conj() * b)
        .sum())
}

/// Solve `A X = B` for square `A` by Gaussian elimination with partial
/// pivoting. The pivot is the largest modulus in the remaining column, lowest
/// row index on ties; elimination aborts with `SingularMatrix` when the best
/// pivot falls at or below `PIVOT_REL` times the largest initial absolute
/// row sum of `A`.
pub fn solve_linear(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = a.rows;
    let max_row_sum = (0..n)
        .map(|i| (0..n).map(|j| a.get(i, j).norm()).sum::<f64>())
        .fold(0.0, f64::max);
    solve_linear_with_pivot_tol(a, b, tol::PIVOT_REL * max_row_sum)
}

/// [`solve_linear`] with an explicit pivot threshold, for callers that know
/// the smallest legitimate pivot scale (a matrix shifted by `mu > 0` has
/// pivots no smaller than roughly `mu`, far below the default relative
/// threshold once `mu` is tiny).
pub fn solve_linear_with_pivot_tol(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    pivot_tol: f64,
) -> Result<ComplexMatrix> {
    if !a.is_square() || a.rows != b.rows {
        return Err(LinalgError::ShapeMismatch {
            op: "solve_linear",
            left_rows: a.rows,
            left_cols: a.cols,
            right_rows: b.rows,
            right_cols: b.cols,
        });
    }
    let n = a.rows;
    let k = b.cols;

    let mut lhs = a.entries.clone();
    let mut rhs = b.entries.clone();

    for col in 0..n {
        // Largest modulus wins; strict comparison keeps the lowest index.
        let mut pivot_row = col;
        let mut pivot_mag = lhs[col * n + col].norm();
        for r in col + 1..n {
            let mag = lhs[r * n + col].norm();
            if mag > pivot_mag {
                pivot_mag = mag;
                pivot_row = r;
            }
        }
        if pivot_mag <= pivot_tol {
            return Err(LinalgError::SingularMatrix {
                pivot: pivot_mag,
                tol: pivot_tol,
                step: col,
            });
        }
        if pivot_row != col {
            for j in 0..n {
                lhs.swap(col * n + j, pivot_row * n + j);
            }
            for j in 0..k {
                rhs.swap(col * k + j, pivot_row * k + j);
            }
        }
        let pivot = lhs[col * n + col];
        for r in col + 1..n {
            let factor = lhs[r * n + col] / pivot;
            if factor.re == 0.0 && factor.im == 0.0 {
                continue;
            }
            lhs[r * n + col] = Complex64::ZERO;
            for j in col + 1..n {
                let upd = factor * lhs[col * n + j];
                lhs[r * n + j] -= upd;
            }
            for j in 0..k {
                let upd = factor * rhs[col * k + j];
                rhs[r * k + j] -= upd;
            }
        }
    }

    // Back substitution.
    for col in (0..n).rev() {
        let pivot = lhs[col * n + col];
        for j in 0..k {
            let mut acc = rhs[col * k + j];
            for p in col + 1..n {
                acc -= lhs[col * n + p] * rhs[p * k + j];
            }
            rhs[col * k + j] = acc / pivot;
        }
    }

    ComplexMatrix::new(n, k, rhs)
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

/// Compensated accumulator (sum plus running error term). Products enter
/// through an exact fused multiply-add error term, so a full dot product is
/// accurate to roughly twice working precision.
struct Accum {
    s: f64,
    c: f64,
}

impl Accum {
    fn new(first: f64) -> Accum {
        Accum { s: first, c: 0.0 }
    }

    fn add(&mut self, x: f64) {
        let (s, e) = two_sum(self.s, x);
        self.s = s;
        self.c += e;
    }

    fn add_prod(&mut self, a: f64, b: f64) {
        let p = a * b;
        let e = a.mul_add(b, -p);
        self.add(p);
        self.c += e;
    }

    fn value(&self) -> f64 {
        self.s + self.c
    }

    /// Round to one f64 and keep the exact remainder.
    fn split(&self) -> (f64, f64) {
        two_sum(self.s, self.c)
    }
}

/// Matrix product accumulated in roughly twice working precision, returned
/// as an unevaluated `hi + lo` pair. The low part is what a plain f64
/// product rounds away; keeping it lets shifted-system solves avoid the
/// `eps * |AB| / mu` error floor of ordinary Gram matrices.
pub fn matmul_compensated(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
) -> Result<(ComplexMatrix, ComplexMatrix)> {
    if a.cols != b.rows {
        return Err(LinalgError::ShapeMismatch {
            op: "matmul_compensated",
            left_rows: a.rows,
            left_cols: a.cols,
            right_rows: b.rows,
            right_cols: b.cols,
        });
    }
    let (m, k, n) = (a.rows, a.cols, b.cols);
    let mut hi = Vec::with_capacity(m * n);
    let mut lo = Vec::with_capacity(m * n);
    for i in 0..m {
        for j in 0..n {
            let mut re = Accum::new(0.0);
            let mut im = Accum::new(0.0);
            for p in 0..k {
                let x = a.get(i, p);
                let y = b.get(p, j);
                re.add_prod(x.re, y.re);
                re.add_prod(-x.im, y.im);
                im.add_prod(x.re, y.im);
                im.add_prod(x.im, y.re);
            }
            let (re_hi, re_lo) = re.split();
            let (im_hi, im_lo) = im.split();
            hi.push(Complex64::new(re_hi, im_hi));
            lo.push(Complex64::new(re_lo, im_lo));
        }
    }
    Ok((
        ComplexMatrix::new(m, n, hi)?,
        ComplexMatrix::new(m, n, lo)?,
    ))
}

/// `B - A X` with compensated accumulation, entrywise accurate to roughly
/// twice working precision. This is the residual feeding iterative
/// refinement; computed naively it would be swamped by cancellation exactly
/// when refinement matters.
fn residual_compensated(a: &ComplexMatrix, x: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let n = a.rows;
    let k = b.cols;
    ComplexMatrix::from_fn(n, k, |i, j| {
        let mut re = Accum::new(b.get(i, j).re);
        let mut im = Accum::new(b.get(i, j).im);
        for p in 0..n {
            let aip = a.get(i, p);
            let xpj = x.get(p, j);
            re.add_prod(-aip.re, xpj.re);
            re.add_prod(aip.im, xpj.im);
            im.add_prod(-aip.re, xpj.im);
            im.add_prod(-aip.im, xpj.re);
        }
        Complex64::new(re.value(), im.value())
    })
}

/// Solve `(G + mu 1) X = B` where the Hermitian PSD matrix `G` is carried
/// as the split-precision pair `gram_hi + gram_lo` from
/// [`matmul_compensated`], and `mu > 0`.
///
/// Elimination runs on the f64 matrix `gram_hi + mu 1`; iterative
/// refinement with a compensated residual against the *split* system then
/// removes the `eps |G| / mu` forward error that makes plain
/// normal-equation solves useless at small `mu`. Pivots are guarded at
/// `mu / 2`: the shifted matrix is positive definite with smallest
/// eigenvalue at least `mu`, so anything smaller signals genuine breakdown
/// rather than rank deficiency.
pub fn solve_shifted_refined(
    gram_hi: &ComplexMatrix,
    gram_lo: &ComplexMatrix,
    mu: f64,
    b: &ComplexMatrix,
) -> Result<ComplexMatrix> {
    let n = gram_hi.rows;
    // Adding mu to a diagonal entry rounds; the lost remainder would
    // perturb the effective shift per entry by ulp(g_ii)/2, which the
    // resolvent amplifies by 1/mu. Carry it in the low part instead.
    let mut shift_lo = vec![0.0; n];
    let shifted = ComplexMatrix::from_fn(n, n, |i, j| {
        if i == j {
            let g = gram_hi.get(i, j);
            let (hi, lo) = two_sum(g.re, mu);
            shift_lo[i] = lo;
            Complex64::new(hi, g.im)
        } else {
            gram_hi.get(i, j)
        }
    });
    let lo_total = ComplexMatrix::from_fn(n, n, |i, j| {
        if i == j {
            gram_lo.get(i, j) + shift_lo[i]
        } else {
            gram_lo.get(i, j)
        }
    });
    let pivot_tol = 0.5 * mu;
    let mut x = solve_linear_with_pivot_tol(&shifted, b, pivot_tol)?;
    for _ in 0..3 {
        let r = residual_compensated(&shifted, &x, b).sub(&lo_total.matmul(&x)?)?;
        let d = solve_linear_with_pivot_tol(&shifted, &r, pivot_tol)?;
        if d.frobenius_norm() <= f64::EPSILON * x.frobenius_norm() {
            break;
        }
        x = x.add(&d)?;
    }
    Ok(x)
}

/// Determinant via the same pivoted elimination as [`solve_linear`];
/// returns exactly zero when elimination meets a sub-tolerance pivot.
pub fn determinant(a: &ComplexMatrix) -> Result<Complex64> {
    if !a.is_square() {
        return Err(LinalgError::ShapeMismatch {
            op: "determinant",
            left_rows: a.rows,
            left_cols: a.cols,
            right_rows: a.rows,
            right_cols: a.rows,
        });
    }
    let n = a.rows;
    let max_row_sum = (0..n)
        .map(|i| (0..n).map(|j| a.get(i, j).norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let pivot_tol = tol::PIVOT_REL * max_row_sum;

    let mut lhs = a.entries.clone();
    let mut det = Complex64::ONE;
    for col in 0..n {
        let mut pivot_row = col;
        let mut pivot_mag = lhs[col * n + col].norm();
        for r in col + 1..n {
            let mag = lhs[r * n + col].norm();
            if mag > pivot_mag {
                pivot_mag = mag;
                pivot_row = r;
            }
        }
        if pivot_mag <= pivot_tol {
            return Ok(Complex64::ZERO);
        }
        if pivot_row != col {
            for j in 0..n {
                lhs.swap(col * n + j, pivot_row * n + j);
            }
            det = -det;
        }
        let pivot = lhs[col * n + col];
        det *= pivot;
        for r in col + 1..n {
            let factor = lhs[r * n + col] / pivot;
            for j in col + 1..n {
                let upd = factor * lhs[col * n + j];
                lhs[r * n + j] -= upd;
            }
        }
    }
    Ok(det)
}
