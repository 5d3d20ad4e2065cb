//! Dense complex linear algebra centered on the Moore-Penrose pseudoinverse.
//!
//! The pseudoinverse is computed by four independent routes (spectral
//! projectors of a Gram matrix, a pure eigenvalue polynomial, the
//! regularized limit `A*(AA* + mu)^-1` as `mu -> 0`, and the singular value
//! decomposition), all of which must agree because the defining Penrose
//! conditions admit exactly one solution. The supporting decompositions
//! (Hermitian eigendecomposition, PSD square root, polar, SVD) and a least
//! squares solver returning the full minimizing set are part of the public
//! surface, as is a file-driven CLI.
//!
//! ```
//! use mpinv::matrix::ComplexMatrix;
//! use mpinv::pinv::{pinv, PinvOptions};
//!
//! let a = ComplexMatrix::from_rows(&[
//!     vec![(2.0, 0.0), (0.0, 0.0), (0.0, 1.0)],
//!     vec![(0.0, 0.0), (0.0, 1.0), (1.0, 0.0)],
//! ]).unwrap();
//! let result = pinv(&a, &PinvOptions::default()).unwrap();
//! assert_eq!(result.route_used, "fullrank-rows");
//! assert!(result.report.within(1e-9));
//! ```

pub mod cli;
pub mod decomp;
pub mod eigen;
pub mod error;
pub mod lstsq;
pub mod matrix;
pub mod pinv;
pub mod tol;

pub use error::{LinalgError, Result};
pub use matrix::{c64, ComplexMatrix, EmbeddingShape};
