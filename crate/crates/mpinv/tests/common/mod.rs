//! Shared generators for the integration suites. Everything is seeded, so
//! every run sees the same matrices.
#![allow(dead_code)]

use mpinv::matrix::{c64, ComplexMatrix};
use mpinv::{eigen, tol};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Dense continuous entries in the unit box.
pub fn random_matrix(rng: &mut ChaCha8Rng, m: usize, n: usize) -> ComplexMatrix {
    let entries: Vec<_> = (0..m * n)
        .map(|_| c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    ComplexMatrix::new(m, n, entries).unwrap()
}

pub fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    let a = random_matrix(rng, n, n);
    a.add(&a.adjoint()).unwrap().scale(c64(0.5, 0.0))
}

/// Rank-`r` product of Gaussian-integer factors. Integer products and sums
/// are exact in f64, so the result is exactly rank `r`: its trailing
/// singular values are zero rather than rounding residue, which is what
/// "rank-deficient" has to mean for a float matrix.
pub fn random_rank_deficient(rng: &mut ChaCha8Rng, m: usize, n: usize, r: usize) -> ComplexMatrix {
    let int = |rng: &mut ChaCha8Rng| {
        c64(
            rng.gen_range(-3i32..=3) as f64,
            rng.gen_range(-3i32..=3) as f64,
        )
    };
    let b_entries: Vec<_> = (0..m * r).map(|_| int(rng)).collect();
    let c_entries: Vec<_> = (0..r * n).map(|_| int(rng)).collect();
    let b = ComplexMatrix::new(m, r, b_entries).unwrap();
    let c = ComplexMatrix::new(r, n, c_entries).unwrap();
    b.matmul(&c).unwrap()
}

/// Like [`random_matrix`] but resampled until the singular value spread
/// stays within `max_ratio`. The regularized route converges only while
/// `cond(Gram) * 1e10` stays inside f64's dynamic range, so unconditioned
/// draws would demand the impossible from any implementation.
pub fn conditioned_matrix(
    rng: &mut ChaCha8Rng,
    m: usize,
    n: usize,
    max_ratio: f64,
) -> ComplexMatrix {
    loop {
        let a = random_matrix(rng, m, n);
        let sv = mpinv::decomp::singular_values(&a).unwrap();
        let smallest = sv.last().copied().unwrap_or(0.0);
        if smallest > 0.0 && sv[0] / smallest <= max_ratio {
            return a;
        }
    }
}

/// Like [`random_rank_deficient`] but resampled until the nonzero singular
/// values stay within `max_ratio` of each other.
pub fn conditioned_rank_deficient(
    rng: &mut ChaCha8Rng,
    m: usize,
    n: usize,
    r: usize,
    max_ratio: f64,
) -> ComplexMatrix {
    loop {
        let a = random_rank_deficient(rng, m, n, r);
        let sv = mpinv::decomp::singular_values(&a).unwrap();
        let smallest_nonzero = sv.iter().rev().find(|&&s| s > 0.0).copied().unwrap_or(0.0);
        if smallest_nonzero > 0.0 && sv[0] / smallest_nonzero <= max_ratio {
            return a;
        }
    }
}

/// A dense unitary: the eigenvector matrix of a random Hermitian matrix.
pub fn random_unitary(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    let h = random_hermitian(rng, n);
    eigen::hermitian_eig(&h, tol::EIG_OFF_DIAG).unwrap().vectors
}

/// A signed complex permutation matrix: one entry from {1, -1, i, -i} per
/// row and column. Exactly unitary in floating point.
pub fn signed_permutation(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        perm.swap(i, j);
    }
    let units = [c64(1.0, 0.0), c64(-1.0, 0.0), c64(0.0, 1.0), c64(0.0, -1.0)];
    let signs: Vec<_> = (0..n).map(|_| units[rng.gen_range(0..4)]).collect();
    ComplexMatrix::from_fn(n, n, |i, j| {
        if perm[i] == j {
            signs[i]
        } else {
            c64(0.0, 0.0)
        }
    })
}

/// An `m x n` matrix with prescribed Gram spectrum: the nonzero eigenvalues
/// of `A A*` are exactly `nonzero` (up to one rounding of `sqrt` and its
/// square) and the rest are exactly zero. Built as `P S Q*` with signed
/// complex permutations, whose products introduce no rounding at all, so
/// the reference pseudoinverse `Q S+ P*` is exact too.
pub fn constructed_spectrum(
    rng: &mut ChaCha8Rng,
    m: usize,
    n: usize,
    nonzero: &[f64],
) -> (ComplexMatrix, ComplexMatrix) {
    assert!(nonzero.len() <= m.min(n));
    let p = signed_permutation(rng, m);
    let q = signed_permutation(rng, n);
    let sigma = ComplexMatrix::from_fn(m, n, |i, j| {
        if i == j && i < nonzero.len() {
            c64(nonzero[i].sqrt(), 0.0)
        } else {
            c64(0.0, 0.0)
        }
    });
    let sigma_pinv = ComplexMatrix::from_fn(n, m, |i, j| {
        if i == j && i < nonzero.len() {
            c64(1.0 / nonzero[i].sqrt(), 0.0)
        } else {
            c64(0.0, 0.0)
        }
    });
    let a = p.matmul(&sigma).unwrap().matmul(&q.adjoint()).unwrap();
    let a_pinv = q.matmul(&sigma_pinv).unwrap().matmul(&p.adjoint()).unwrap();
    (a, a_pinv)
}
