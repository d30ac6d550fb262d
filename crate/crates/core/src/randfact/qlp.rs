use super::config::SketchConfig;
use super::gaussian::seeded_gaussian;
use super::operator::MatrixOperator;
use super::power::pi_orth_with;
use crate::error::Result;
use crate::matcore::{qr_pivoted, qr_unpivoted, validate, DenseMatrix};

/// `A ≈ Q L Pᵀ` with `L` lower triangular.
///
/// Randomized factorizations also keep the first-stage triangular factor
/// `R` (from `A P̄ = Q R`), the basis `P̄`, the configuration and the sampled
/// sketch `Φ`, which the bound evaluators need.
#[derive(Clone, Debug)]
pub struct QlpFactors {
    pub q_mat: DenseMatrix,
    pub l_mat: DenseMatrix,
    pub p_mat: DenseMatrix,
    pub r_mat: DenseMatrix,
    pub p_bar: Option<DenseMatrix>,
    pub config: Option<SketchConfig>,
    pub phi: Option<DenseMatrix>,
}

impl QlpFactors {
    pub fn reconstruct(&self) -> DenseMatrix {
        self.q_mat.matmul(&self.l_mat).matmul_t(&self.p_mat)
    }

    /// Magnitudes of the diagonal of `L`, in factor order (not sorted).
    pub fn l_values(&self) -> Vec<f64> {
        self.l_mat.diag().iter().map(|x| x.abs()).collect()
    }

    pub fn rank(&self) -> usize {
        self.l_mat.rows()
    }
}

/// Randomized unpivoted QLP of `a`.
pub fn ru_qlp<O: MatrixOperator + ?Sized>(a: &O, config: &SketchConfig) -> Result<QlpFactors> {
    let (m, n) = (a.nrows(), a.ncols());
    config.validate_for(m, n)?;
    let d = config.d();
    let phi = seeded_gaussian(m, d, config.seed);
    let p_bar = pi_orth_with(a, &phi, config.q, config.ortho_interval, config.orth)?;

    let ap = a.apply(&p_bar);
    validate(&ap)?;
    let first = qr_unpivoted(&ap)?;
    let second = qr_unpivoted(&first.r.transpose())?;

    Ok(QlpFactors {
        q_mat: first.q,
        l_mat: second.r.transpose(),
        p_mat: p_bar.matmul(&second.q),
        r_mat: first.r,
        p_bar: Some(p_bar),
        config: Some(*config),
        phi: Some(phi),
    })
}

/// Deterministic pivoted QLP: two column-pivoted QR factorizations, the
/// second applied to the transposed triangular factor of the first.
pub fn pivoted_qlp(a: &DenseMatrix) -> Result<QlpFactors> {
    validate(a)?;
    let first = qr_pivoted(a)?;
    let second = qr_pivoted(&first.r.transpose())?;
    let perm_a = first.perm.as_deref().expect("pivoted");
    let perm_r = second.perm.as_deref().expect("pivoted");
    Ok(QlpFactors {
        q_mat: first.q.permute_cols(perm_r),
        l_mat: second.r.transpose(),
        p_mat: second.q.permute_rows_by(perm_a),
        r_mat: first.r,
        p_bar: None,
        config: None,
        phi: None,
    })
}
