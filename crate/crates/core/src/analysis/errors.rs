use super::angles::{principal_angles, PrincipalAngles};
use super::oracle::SpectralOracle;
use crate::error::{Error, Result};
use crate::matcore::{singular_values, spectral_norm, svd, vec_norm, DenseMatrix};
use crate::randfact::QlpFactors;

/// A value measured in both the spectral and the Frobenius norm.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormPair {
    pub spectral: f64,
    pub frobenius: f64,
}

impl NormPair {
    pub fn of(m: &DenseMatrix) -> Self {
        NormPair {
            spectral: spectral_norm(m),
            frobenius: m.frobenius_norm(),
        }
    }

    pub fn get(&self, frobenius: bool) -> f64 {
        if frobenius {
            self.frobenius
        } else {
            self.spectral
        }
    }
}

/// Everything observable about one factorization, split at rank `k`.
#[derive(Clone, Debug)]
pub struct EmpiricalErrors {
    pub k: usize,
    /// `θ_i = ∠(range Q, range U_k)`.
    pub theta: PrincipalAngles,
    /// `φ_i = ∠(range P, range V_k)`.
    pub phi: PrincipalAngles,
    /// `sin ∠(range Q, u_i)` for `i = 1..=k`.
    pub sin_q_u: Vec<f64>,
    /// `sin ∠(range P, v_i)` for `i = 1..=k`.
    pub sin_p_v: Vec<f64>,
    /// Diagonal of `L` in factor order.
    pub l_values: Vec<f64>,
    pub sigma_r11: Vec<f64>,
    pub r22: NormPair,
    pub sigma_l: Vec<f64>,
    pub sigma_l11: Vec<f64>,
    pub l22: NormPair,
    /// `‖A − Q Qᵀ A‖`
    pub err_q: NormPair,
    /// `‖A − Q [Qᵀ A]_k‖`
    pub err_q_k: NormPair,
    /// `‖A − A P Pᵀ‖`
    pub err_p: NormPair,
    /// `‖A − [A P]_k Pᵀ‖`
    pub err_p_k: NormPair,
}

pub fn empirical_errors(a: &DenseMatrix, f: &QlpFactors, k: usize) -> Result<EmpiricalErrors> {
    empirical_errors_with(&SpectralOracle::new(a)?, a, f, k)
}

fn truncate_rank(m: &DenseMatrix, k: usize) -> Result<DenseMatrix> {
    Ok(svd(m)?.truncated(k))
}

fn split_blocks(t: &DenseMatrix, k: usize) -> Result<(Vec<f64>, NormPair)> {
    let t11 = t.block(0..k, 0..k);
    let sigma = singular_values(&t11)?;
    let t22 = t.block(k..t.rows(), k..t.cols());
    let norms = if t22.is_empty() {
        NormPair { spectral: 0.0, frobenius: 0.0 }
    } else {
        NormPair::of(&t22)
    };
    Ok((sigma, norms))
}

/// As [`empirical_errors`] with a precomputed oracle of `a`.
pub fn empirical_errors_with(
    oracle: &SpectralOracle,
    a: &DenseMatrix,
    f: &QlpFactors,
    k: usize,
) -> Result<EmpiricalErrors> {
    let d = f.l_mat.rows();
    if k == 0 || k > d {
        return Err(Error::Validation(format!("k = {k} must lie in 1..={d}")));
    }
    if oracle.shape() != a.shape() {
        return Err(Error::Validation("oracle was built for a different matrix".into()));
    }
    let q = &f.q_mat;
    let p = &f.p_mat;
    let uk = oracle.u_k(k);
    let vk = oracle.v_k(k);
    let theta = principal_angles(q, &uk)?;
    let phi = principal_angles(p, &vk)?;

    let per_vector = |basis: &DenseMatrix, vecs: &DenseMatrix| -> Vec<f64> {
        let resid = vecs.sub(&basis.matmul(&basis.t_matmul(vecs)));
        (0..vecs.cols()).map(|j| vec_norm(resid.col(j)).min(1.0)).collect()
    };
    let sin_q_u = per_vector(q, &uk);
    let sin_p_v = per_vector(p, &vk);

    let (sigma_r11, r22) = split_blocks(&f.r_mat, k)?;
    let (sigma_l11, l22) = split_blocks(&f.l_mat, k)?;
    let sigma_l = singular_values(&f.l_mat)?;

    let qta = q.t_matmul(a);
    let err_q = NormPair::of(&a.sub(&q.matmul(&qta)));
    let err_q_k = NormPair::of(&a.sub(&q.matmul(&truncate_rank(&qta, k)?)));
    let ap = a.matmul(p);
    let err_p = NormPair::of(&a.sub(&ap.matmul_t(p)));
    let err_p_k = NormPair::of(&a.sub(&truncate_rank(&ap, k)?.matmul_t(p)));

    Ok(EmpiricalErrors {
        k,
        theta,
        phi,
        sin_q_u,
        sin_p_v,
        l_values: f.l_values(),
        sigma_r11,
        r22,
        sigma_l,
        sigma_l11,
        l22,
        err_q,
        err_q_k,
        err_p,
        err_p_k,
    })
}
