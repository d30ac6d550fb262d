//! Randomized unpivoted QLP (RU-QLP) low-rank decompositions.
//!
//! The crate is organised bottom-up:
//!
//! * [`matcore`]: dense matrices, Householder QR, Jacobi SVD, norms.
//! * [`randfact`]: RU-QLP, power iteration with re-orthonormalization,
//!   deterministic pivoted QLP and the randomized baselines (R-SVD,
//!   CoR-UTV, RP-TSOD).
//! * [`analysis`]: principal angles, observed errors and the deterministic
//!   and expected-value bounds they are checked against.
//! * [`matgen`]: test-matrix families and Matrix Market I/O.
//! * [`bench`]: the timing harness.

pub mod analysis;
pub mod bench;
pub mod error;
pub mod matcore;
pub mod matgen;
pub mod randfact;

pub use error::{Error, Result};
pub use matcore::DenseMatrix;
