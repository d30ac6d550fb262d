//! Dense matrices and the deterministic factorizations everything else is
//! built on: Householder QR (plain and column-pivoted), one-sided Jacobi SVD,
//! orthonormal bases and norms. These double as brute-force oracles for the
//! randomized routines.

mod matrix;
mod norms;
mod qr;
mod svd;

pub use matrix::{dot, vec_norm, DenseMatrix};
pub use norms::{matrix_norm, spectral_norm, NormKind};
pub use qr::{orth_householder, orthonormal_complement, qr_pivoted, qr_unpivoted, QrFactors};
pub use svd::{orth, pseudoinverse, rank_tolerance, singular_values, svd, SvdFactors, MAX_SWEEPS};

pub(crate) use qr::validate;
