//! Seeded Gaussian sampling.
//!
//! The generator is ChaCha8 (`rand_chacha`, a counter-based stream cipher
//! RNG) seeded through `SeedableRng::seed_from_u64`, and normal deviates come
//! from the ziggurat sampler behind `rand_distr::StandardNormal`. Matrices
//! are filled in column-major order. Changing any of these changes every
//! seeded output, so they are pinned.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::matcore::DenseMatrix;

pub type SeededRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `rows × cols` matrix of i.i.d. standard normal entries.
pub fn gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> DenseMatrix {
    let data: Vec<f64> = (0..rows * cols).map(|_| rng.sample(StandardNormal)).collect();
    DenseMatrix::from_col_major(rows, cols, data).expect("gaussian samples are finite")
}

/// Same as [`gaussian_matrix`] with a fresh generator seeded from `seed`.
pub fn seeded_gaussian(rows: usize, cols: usize, seed: u64) -> DenseMatrix {
    gaussian_matrix(rows, cols, &mut seeded_rng(seed))
}
