use std::path::PathBuf;

use rand::seq::index;
use rand::Rng;
use rand_distr::StandardNormal;

use super::mtx::load_matrix_market;
use crate::error::{Error, Result};
use crate::matcore::{qr_unpivoted, spectral_norm, DenseMatrix};
use crate::randfact::{gaussian_matrix, seeded_rng, SeededRng};

/// Haar-distributed `n × n` orthogonal matrix: QR of a Gaussian matrix with
/// the diagonal of `R` made nonnegative.
pub fn random_orthonormal<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DenseMatrix {
    let g = gaussian_matrix(n, n, rng);
    qr_unpivoted(&g).expect("Gaussian matrix is finite and non-empty").q
}

fn orthogonal_pair(n: usize, rng: &mut SeededRng) -> (DenseMatrix, DenseMatrix) {
    let u = random_orthonormal(n, rng);
    let v = random_orthonormal(n, rng);
    (u, v)
}

fn check_size(n: usize, k: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Validation("n must be positive".into()));
    }
    if k == 0 || k >= n {
        return Err(Error::Validation(format!("need 1 <= k < n, got k = {k}, n = {n}")));
    }
    Ok(())
}

/// `U Σ Vᵀ + μ σ_k A_N`.
///
/// `Σ` decreases linearly from 1 to 1e-10 over all `n` indices and is then
/// zeroed past `k`. `A_N` is Gaussian scaled to unit spectral norm.
pub fn gen_lowrank_noise(n: usize, k: usize, mu: f64, seed: u64) -> Result<DenseMatrix> {
    check_size(n, k)?;
    if !(mu >= 0.0 && mu.is_finite()) {
        return Err(Error::Validation(format!("mu must be finite and nonnegative, got {mu}")));
    }
    let mut rng = seeded_rng(seed);
    let (u, v) = orthogonal_pair(n, &mut rng);
    let step = if n > 1 { (1.0 - 1e-10) / (n - 1) as f64 } else { 0.0 };
    let sigma: Vec<f64> = (0..n)
        .map(|i| if i < k { 1.0 - step * i as f64 } else { 0.0 })
        .collect();
    let mut a = u.scale_cols(&sigma).matmul_t(&v);
    if mu > 0.0 {
        let noise = gaussian_matrix(n, n, &mut rng);
        let scale = mu * sigma[k - 1] / spectral_norm(&noise);
        a.axpy(scale, &noise);
    }
    Ok(a)
}

/// `U Σ Vᵀ` with `Σ = diag(1, …, 1, 2^{-z}, 3^{-z}, …, (n−k+1)^{-z})`.
pub fn gen_polydecay(n: usize, k: usize, z: f64, seed: u64) -> Result<DenseMatrix> {
    check_size(n, k)?;
    if !(z > 0.0 && z.is_finite()) {
        return Err(Error::Validation(format!("z must be positive, got {z}")));
    }
    let mut rng = seeded_rng(seed);
    let (u, v) = orthogonal_pair(n, &mut rng);
    let sigma: Vec<f64> = (0..n)
        .map(|i| if i < k { 1.0 } else { ((i - k + 2) as f64).powf(-z) })
        .collect();
    Ok(u.scale_cols(&sigma).matmul_t(&v))
}

/// Dense `n × n` standard Gaussian matrix.
pub fn gen_dense(n: usize, seed: u64) -> Result<DenseMatrix> {
    if n == 0 {
        return Err(Error::Validation("n must be positive".into()));
    }
    Ok(gaussian_matrix(n, n, &mut seeded_rng(seed)))
}

/// `n × n` matrix with exactly `round(density · n²)` standard Gaussian
/// entries at positions drawn uniformly without replacement.
pub fn gen_sparse(n: usize, density: f64, seed: u64) -> Result<DenseMatrix> {
    if n == 0 {
        return Err(Error::Validation("n must be positive".into()));
    }
    if !(density > 0.0 && density <= 1.0) {
        return Err(Error::Validation(format!("density must lie in (0, 1], got {density}")));
    }
    let total = n * n;
    let nnz = ((density * total as f64).round() as usize).min(total);
    let mut rng = seeded_rng(seed);
    let mut positions = index::sample(&mut rng, total, nnz).into_vec();
    positions.sort_unstable();
    let mut a = DenseMatrix::zeros(n, n);
    let data = a.data_mut();
    for pos in positions {
        let mut x: f64 = rng.sample(StandardNormal);
        // A zero draw would silently lower the count.
        while x == 0.0 {
            x = rng.sample(StandardNormal);
        }
        data[pos] = x;
    }
    Ok(a)
}

/// A named, reproducible test matrix.
#[derive(Clone, Debug, PartialEq)]
pub enum MatrixSpec {
    LowRankNoise { n: usize, k: usize, mu: f64, seed: u64 },
    PolyDecay { n: usize, k: usize, z: f64, seed: u64 },
    GaussianDense { n: usize, seed: u64 },
    GaussianSparse { n: usize, density: f64, seed: u64 },
    File { path: PathBuf },
}

impl MatrixSpec {
    pub const STANDARD_N: usize = 800;
    pub const STANDARD_K: usize = 16;

    pub fn low_rank_large_gap(seed: u64) -> Self {
        MatrixSpec::LowRankNoise { n: Self::STANDARD_N, k: Self::STANDARD_K, mu: 0.005, seed }
    }

    pub fn low_rank_medium_gap(seed: u64) -> Self {
        MatrixSpec::LowRankNoise { n: Self::STANDARD_N, k: Self::STANDARD_K, mu: 0.01, seed }
    }

    pub fn low_rank_slow_decay(seed: u64) -> Self {
        MatrixSpec::PolyDecay { n: Self::STANDARD_N, k: Self::STANDARD_K, z: 1.0, seed }
    }

    pub fn low_rank_fast_decay(seed: u64) -> Self {
        MatrixSpec::PolyDecay { n: Self::STANDARD_N, k: Self::STANDARD_K, z: 2.0, seed }
    }

    pub fn family(&self) -> &'static str {
        match self {
            MatrixSpec::LowRankNoise { .. } => "lowrank_noise",
            MatrixSpec::PolyDecay { .. } => "polydecay",
            MatrixSpec::GaussianDense { .. } => "gaussian_dense",
            MatrixSpec::GaussianSparse { .. } => "gaussian_sparse",
            MatrixSpec::File { .. } => "file",
        }
    }

    /// Short identifier used in benchmark output.
    pub fn descriptor(&self) -> String {
        match self {
            MatrixSpec::LowRankNoise { n, k, mu, seed } => format!("lowrank_noise(n={n},k={k},mu={mu},seed={seed})"),
            MatrixSpec::PolyDecay { n, k, z, seed } => format!("polydecay(n={n},k={k},z={z},seed={seed})"),
            MatrixSpec::GaussianDense { n, seed } => format!("gaussian_dense(n={n},seed={seed})"),
            MatrixSpec::GaussianSparse { n, density, seed } => {
                format!("gaussian_sparse(n={n},density={density},seed={seed})")
            }
            MatrixSpec::File { path } => format!("file({})", path.display()),
        }
    }

    pub fn generate(&self) -> Result<DenseMatrix> {
        match self {
            MatrixSpec::LowRankNoise { n, k, mu, seed } => gen_lowrank_noise(*n, *k, *mu, *seed),
            MatrixSpec::PolyDecay { n, k, z, seed } => gen_polydecay(*n, *k, *z, *seed),
            MatrixSpec::GaussianDense { n, seed } => gen_dense(*n, *seed),
            MatrixSpec::GaussianSparse { n, density, seed } => gen_sparse(*n, *density, *seed),
            MatrixSpec::File { path } => load_matrix_market(path),
        }
    }
}
