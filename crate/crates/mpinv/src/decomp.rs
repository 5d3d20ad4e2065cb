//! Positive-semidefinite square root, polar decomposition and singular value
//! decomposition, constructed from the Hermitian eigendecomposition of Gram
//! matrices.
//!
//! The square SVD comes straight out of the polar construction: with
//! `A*A = P D P*` and `w_k = A v_k / sqrt(d_k)` one gets `A = Q D^{1/2} P*`,
//! so `V = Q`, `S = D^{1/2}`, `W = P`. Rectangular input is embedded into an
//! `(m+n) x (m+n)` square first and the factors are recorded together with
//! the embedding shape.

use num_complex::Complex64;

use crate::eigen::{self, SweepOrder};
use crate::error::{LinalgError, Result};
use crate::matrix::{ComplexMatrix, EmbeddingShape};
use crate::tol;

/// Polar factors of a square matrix. [`polar`] produces
/// `A = unitary * psd_factor` with `psd_factor = sqrt(A*A)`; [`polar_left`]
/// produces `A = psd_factor * unitary` with `psd_factor = sqrt(AA*)`.
#[derive(Debug, Clone)]
pub struct PolarFactors {
    pub unitary: ComplexMatrix,
    pub psd_factor: ComplexMatrix,
}

/// Singular value decomposition `A = V S W*` (square), or
/// `A = I V S W* J` with the selection maps of the recorded embedding shape
/// (rectangular).
#[derive(Debug, Clone)]
pub struct SvdFactors {
    pub v: ComplexMatrix,
    pub singular_values: Vec<f64>,
    pub w: ComplexMatrix,
    pub shape: Option<EmbeddingShape>,
}

impl SvdFactors {
    /// The diagonal factor as a matrix.
    pub fn sigma(&self) -> ComplexMatrix {
        ComplexMatrix::from_real_diag(&self.singular_values)
    }

    /// Rebuild the decomposed matrix (extracting the original rectangle when
    /// the factors came from an embedding).
    pub fn reconstruct(&self) -> Result<ComplexMatrix> {
        let square = &(&self.v * &self.sigma()) * &self.w.adjoint();
        match &self.shape {
            None => Ok(square),
            Some(shape) => square.extract_rect(shape),
        }
    }
}

/// Eigendecompose `A*A`, clamp the provably-PSD spectrum, and return the
/// descending eigenvalues `d`, the unitary `P` of eigenvector columns, and
/// the unitary `Q` whose first `rank` columns are `A v_k / sqrt(d_k)`,
/// completed to a basis for the rank-deficient directions.
fn gram_basis(
    a: &ComplexMatrix,
    order: SweepOrder,
) -> Result<(Vec<f64>, ComplexMatrix, ComplexMatrix)> {
    let n = a.rows();
    let gram = &a.adjoint() * a;
    let mut eig = eigen::hermitian_eig_with_sweep(&gram, tol::EIG_OFF_DIAG, order)?;
    eig.clamp_psd(gram.frobenius_norm())?;

    // Rank truncation on the eigenvalue scale. The Gram spectrum carries
    // absolute noise of order eps*|G|, which a square root would turn into
    // sqrt(eps)-sized ghost singular values on exactly singular input;
    // taking eigenvalues below the cut as exact zeros keeps the rank
    // decision consistent with the pseudoinverse routes.
    let mut d = eig.eigenvalues.clone();
    let d_max = d.first().copied().unwrap_or(0.0);
    let rank_cut = tol::RANK_REL * d_max;
    for value in &mut d {
        if *value <= rank_cut {
            *value = 0.0;
        }
    }

    let mut q_cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    for (k, &dk) in d.iter().enumerate() {
        if dk <= 0.0 {
            break;
        }
        let vk = eig.eigenvector(k);
        let avk = a * &vk;
        let inv_sqrt = 1.0 / dk.sqrt();
        q_cols.push((0..n).map(|i| avk.get(i, 0) * inv_sqrt).collect());
    }
    complete_orthonormal(&mut q_cols, n);
    let q = ComplexMatrix::from_fn(n, n, |i, j| q_cols[j][i]);
    Ok((d, eig.vectors, q))
}

/// Extend a set of orthonormal columns to a full basis with modified
/// Gram-Schmidt over the canonical basis vectors. A first pass keeps
/// candidates whose residual norm stays >= 0.5 after projection; if the
/// basis is still short (possible when the missing subspace is spread thinly
/// over all canonical directions) further passes take the best remaining
/// candidate each time. Deterministic throughout.
fn complete_orthonormal(cols: &mut Vec<Vec<Complex64>>, n: usize) {
    let project_out = |cols: &[Vec<Complex64>], v: &mut Vec<Complex64>| {
        for col in cols {
            let overlap: Complex64 = col
                .iter()
                .zip(v.iter())
                .map(|(c, x)| c.conj() * *x)
                .sum();
            for (x, c) in v.iter_mut().zip(col.iter()) {
                *x -= overlap * c;
            }
        }
    };
    let norm = |v: &[Complex64]| v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();

    let canonical = |k: usize| -> Vec<Complex64> {
        let mut e = vec![Complex64::ZERO; n];
        e[k] = Complex64::ONE;
        e
    };

    for k in 0..n {
        if cols.len() == n {
            return;
        }
        let mut cand = canonical(k);
        project_out(cols, &mut cand);
        // Re-orthogonalize once; plain MGS can leave O(eps/gap) overlap.
        project_out(cols, &mut cand);
        let r = norm(&cand);
        if r >= 0.5 {
            for x in cand.iter_mut() {
                *x /= r;
            }
            cols.push(cand);
        }
    }
    while cols.len() < n {
        let mut best: Option<(f64, Vec<Complex64>)> = None;
        for k in 0..n {
            let mut cand = canonical(k);
            project_out(cols, &mut cand);
            project_out(cols, &mut cand);
            let r = norm(&cand);
            if best.as_ref().is_none_or(|(br, _)| r > *br) {
                best = Some((r, cand));
            }
        }
        let (r, mut cand) = best.expect("n > 0");
        assert!(r > 0.0, "cannot complete orthonormal basis");
        for x in cand.iter_mut() {
            *x /= r;
        }
        cols.push(cand);
    }
}

/// Hermitian PSD square root `sqrt(H) = P D^{1/2} P*`. Eigenvalues within
/// the clamp width below zero are treated as zero; anything lower fails
/// with `NotPsd`.
pub fn sqrt_psd(h: &ComplexMatrix) -> Result<ComplexMatrix> {
    let mut eig = eigen::hermitian_eig(h, tol::EIG_OFF_DIAG)?;
    eig.clamp_psd(h.frobenius_norm())?;
    let roots: Vec<f64> = eig.eigenvalues.iter().map(|d| d.sqrt()).collect();
    let p = &eig.vectors;
    Ok(&(p * &ComplexMatrix::from_real_diag(&roots)) * &p.adjoint())
}

/// Polar decomposition `A = U sqrt(A*A)` of a square matrix. `U` is always
/// unitary; it is unique exactly when `A` is invertible.
pub fn polar(a: &ComplexMatrix) -> Result<PolarFactors> {
    polar_with_sweep(a, SweepOrder::RowCyclic)
}

/// [`polar`] with an explicit eigensolver sweep order (the factors of an
/// invertible matrix must not depend on it).
pub fn polar_with_sweep(a: &ComplexMatrix, order: SweepOrder) -> Result<PolarFactors> {
    if !a.is_square() {
        return Err(LinalgError::ShapeMismatch {
            op: "polar",
            left_rows: a.rows(),
            left_cols: a.cols(),
            right_rows: a.cols(),
            right_cols: a.rows(),
        });
    }
    let (d, p, q) = gram_basis(a, order)?;
    let roots: Vec<f64> = d.iter().map(|x| x.sqrt()).collect();
    let psd_factor = &(&p * &ComplexMatrix::from_real_diag(&roots)) * &p.adjoint();
    let unitary = &q * &p.adjoint();
    Ok(PolarFactors {
        unitary,
        psd_factor,
    })
}

/// Mirrored polar decomposition `A = sqrt(AA*) V` with unitary `V`,
/// obtained from the right polar form of `A*`.
pub fn polar_left(a: &ComplexMatrix) -> Result<PolarFactors> {
    let right = polar(&a.adjoint())?;
    Ok(PolarFactors {
        unitary: right.unitary.adjoint(),
        psd_factor: right.psd_factor,
    })
}

/// Singular value decomposition of a square matrix: `A = V S W*` with `V`,
/// `W` unitary and `S` the descending nonnegative square roots of the
/// eigenvalues of `A*A`. For the zero matrix both unitary factors default
/// to the identity.
pub fn svd_square(a: &ComplexMatrix) -> Result<SvdFactors> {
    svd_square_with_sweep(a, SweepOrder::RowCyclic)
}

/// [`svd_square`] with an explicit eigensolver sweep order.
pub fn svd_square_with_sweep(a: &ComplexMatrix, order: SweepOrder) -> Result<SvdFactors> {
    if !a.is_square() {
        return Err(LinalgError::ShapeMismatch {
            op: "svd_square",
            left_rows: a.rows(),
            left_cols: a.cols(),
            right_rows: a.cols(),
            right_cols: a.rows(),
        });
    }
    let (d, p, q) = gram_basis(a, order)?;
    Ok(SvdFactors {
        v: q,
        singular_values: d.iter().map(|x| x.sqrt()).collect(),
        w: p,
        shape: None,
    })
}

/// Singular value decomposition of a rectangle through the square embedding:
/// the factors decompose `A' = (A 0; 0 0)` and carry the shape needed to
/// read `A` back out of `V S W*`.
pub fn svd_rect(a: &ComplexMatrix) -> Result<SvdFactors> {
    let (embedded, shape) = a.embed_square();
    let mut factors = svd_square(&embedded)?;
    factors.shape = Some(shape);
    Ok(factors)
}

/// The `min(m, n)` singular values of a rectangle, descending, computed from
/// the smaller Gram matrix (only the values are needed, so the embedding
/// detour would be wasted work). Eigenvalues below the rank cut are exact
/// zeros, matching the other decompositions.
pub fn singular_values(a: &ComplexMatrix) -> Result<Vec<f64>> {
    let gram = if a.rows() <= a.cols() {
        a * &a.adjoint()
    } else {
        &a.adjoint() * a
    };
    let mut eig = eigen::hermitian_eig(&gram, tol::EIG_OFF_DIAG)?;
    eig.clamp_psd(gram.frobenius_norm())?;
    let cut = tol::RANK_REL * eig.eigenvalues.first().copied().unwrap_or(0.0);
    Ok(eig
        .eigenvalues
        .iter()
        .map(|&d| if d > cut { d.sqrt() } else { 0.0 })
        .collect())
}
