//! Test matrices: the low-rank-plus-noise and polynomial-decay families,
//! Gaussian benchmark matrices, and Matrix Market I/O.

mod families;
mod mtx;

pub use families::{gen_dense, gen_lowrank_noise, gen_polydecay, gen_sparse, random_orthonormal, MatrixSpec};
pub use mtx::{load_matrix_market, parse_matrix_market, write_csv_dump, write_matrix_market};
