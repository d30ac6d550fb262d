use crate::error::{Error, Result};
use crate::matcore::{orthonormal_complement, pseudoinverse, rank_tolerance, singular_values, svd, DenseMatrix, SvdFactors};

/// The SVD of the input, computed once and shared by every check that
/// needs exact singular values or vectors.
#[derive(Clone, Debug)]
pub struct SpectralOracle {
    rows: usize,
    cols: usize,
    svd: SvdFactors,
}

impl SpectralOracle {
    pub fn new(a: &DenseMatrix) -> Result<Self> {
        Ok(SpectralOracle {
            rows: a.rows(),
            cols: a.cols(),
            svd: svd(a)?,
        })
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn sigma(&self) -> &[f64] {
        &self.svd.sigma
    }

    pub fn svd(&self) -> &SvdFactors {
        &self.svd
    }

    /// Leading `k` left singular vectors.
    pub fn u_k(&self, k: usize) -> DenseMatrix {
        self.svd.u.columns(0..k)
    }

    /// Leading `k` right singular vectors.
    pub fn v_k(&self, k: usize) -> DenseMatrix {
        self.svd.v.columns(0..k)
    }

    /// `U_⊥`, the `m × (m − k)` complement of `U_k`. The thin SVD supplies
    /// `min(m, n) − k` columns; any remainder is completed.
    pub fn u_perp(&self, k: usize) -> Result<DenseMatrix> {
        let u = &self.svd.u;
        if u.cols() == self.rows {
            return Ok(u.columns(k..self.rows));
        }
        let extra = orthonormal_complement(u)?;
        let tail = u.columns(k..u.cols());
        let mut data = tail.into_data();
        data.extend_from_slice(extra.data());
        DenseMatrix::from_col_major(self.rows, self.rows - k, data)
    }

    pub fn summary(&self, k: usize) -> Result<SpectrumSummary> {
        SpectrumSummary::new(self.svd.sigma.clone(), k)
    }
}

/// Spectrum quantities the bounds are written in.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumSummary {
    pub sigma: Vec<f64>,
    pub k: usize,
    /// `δ_i = σ_{k+1} / σ_i` for `i = 1..=k`.
    pub delta: Vec<f64>,
    /// `σ_n / σ_1`.
    pub gamma: f64,
    /// `‖Σ_⊥‖₂ = σ_{k+1}`.
    pub sigma_perp_spectral: f64,
    /// `‖Σ_⊥‖_F`.
    pub sigma_perp_frobenius: f64,
}

impl SpectrumSummary {
    /// `sigma` must be non-increasing with at least `k + 1` entries.
    pub fn new(sigma: Vec<f64>, k: usize) -> Result<Self> {
        if k == 0 || k >= sigma.len() {
            return Err(Error::Validation(format!(
                "split index k = {k} must lie in 1..{}",
                sigma.len()
            )));
        }
        if sigma.windows(2).any(|w| w[1] > w[0]) || sigma.iter().any(|s| s.is_nan() || *s < 0.0) {
            return Err(Error::Validation("singular values must be nonnegative and sorted".into()));
        }
        if sigma[k - 1] == 0.0 {
            return Err(Error::Domain(format!("sigma_{k} is zero; delta is undefined")));
        }
        let tail = sigma[k];
        let delta = sigma[..k].iter().map(|s| tail / s).collect();
        let gamma = sigma[sigma.len() - 1] / sigma[0];
        let sigma_perp_frobenius = crate::matcore::vec_norm(&sigma[k..]);
        Ok(SpectrumSummary {
            k,
            delta,
            gamma,
            sigma_perp_spectral: tail,
            sigma_perp_frobenius,
            sigma,
        })
    }

    pub fn sigma_perp(&self, frobenius: bool) -> f64 {
        if frobenius {
            self.sigma_perp_frobenius
        } else {
            self.sigma_perp_spectral
        }
    }
}

/// `Uᵀ Φ` split after row `k`, and the coupling `‖Φ̂₂ Φ̂₁†‖₂`.
#[derive(Clone, Debug)]
pub struct SketchPartition {
    pub phi_hat_1: DenseMatrix,
    pub phi_hat_2: DenseMatrix,
    pub coupling: f64,
}

pub fn partition_sketch(a: &DenseMatrix, phi: &DenseMatrix, k: usize) -> Result<SketchPartition> {
    partition_sketch_with(&SpectralOracle::new(a)?, phi, k)
}

/// As [`partition_sketch`] with a precomputed oracle.
///
/// Fails with a rank-deficient-sketch error when the smallest singular
/// value of `Φ̂₁` is at or below the matcore rank tolerance.
pub fn partition_sketch_with(oracle: &SpectralOracle, phi: &DenseMatrix, k: usize) -> Result<SketchPartition> {
    let (m, n) = oracle.shape();
    if phi.rows() != m {
        return Err(Error::Validation(format!("sketch has {} rows, matrix has {m}", phi.rows())));
    }
    if k == 0 || k > m.min(n) || k > phi.cols() {
        return Err(Error::Validation(format!(
            "k = {k} must lie in 1..=min(m, n, d) = {}",
            m.min(n).min(phi.cols())
        )));
    }
    let phi_hat_1 = oracle.u_k(k).t_matmul(phi);
    let phi_hat_2 = if k == m {
        DenseMatrix::zeros(0, phi.cols())
    } else {
        oracle.u_perp(k)?.t_matmul(phi)
    };

    let s1 = singular_values(&phi_hat_1)?;
    let smin = s1[s1.len() - 1];
    let tolerance = rank_tolerance(phi_hat_1.rows(), phi_hat_1.cols(), s1[0]);
    if smin <= tolerance {
        return Err(Error::RankDeficientSketch { sigma_min: smin, tolerance });
    }
    let coupling = if phi_hat_2.rows() == 0 {
        0.0
    } else {
        let prod = phi_hat_2.matmul(&pseudoinverse(&phi_hat_1)?);
        singular_values(&prod)?[0]
    };
    Ok(SketchPartition {
        phi_hat_1,
        phi_hat_2,
        coupling,
    })
}
