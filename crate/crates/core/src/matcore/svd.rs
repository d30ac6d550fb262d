//! Thin SVD by one-sided (Hestenes) Jacobi rotations.
//!
//! For `m ≥ n` the input is first reduced by column-pivoted QR, `A Π = Q R`,
//! and the Jacobi sweeps run on `X = Rᵀ`. Rotations `X J` drive the columns
//! of `X` to mutual orthogonality, so `X V_x = U_x Σ` and
//! `A = (Q V_x) Σ (Π U_x)ᵀ`. The pivoted preconditioning makes `Rᵀ`
//! strongly graded, which cuts the sweep count considerably, and Jacobi
//! keeps high relative accuracy for small singular values.

use super::matrix::{dot, vec_norm, DenseMatrix};
use super::qr::{qr_pivoted, validate};
use crate::error::{Error, Result};

/// Maximum number of full sweeps before giving up.
pub const MAX_SWEEPS: usize = 60;

/// Thin singular value decomposition `a = u diag(sigma) vᵀ` with
/// `r = min(m, n)` triplets sorted by non-increasing singular value.
#[derive(Clone, Debug)]
pub struct SvdFactors {
    pub u: DenseMatrix,
    pub sigma: Vec<f64>,
    pub v: DenseMatrix,
}

impl SvdFactors {
    /// `u diag(sigma) vᵀ`
    pub fn reconstruct(&self) -> DenseMatrix {
        self.u.scale_cols(&self.sigma).matmul_t(&self.v)
    }

    /// Best rank-`r` approximation `[A]_r` (Eckart–Young).
    pub fn truncated(&self, r: usize) -> DenseMatrix {
        let r = r.min(self.sigma.len());
        self.u
            .columns(0..r)
            .scale_cols(&self.sigma[..r])
            .matmul_t(&self.v.columns(0..r))
    }
}

/// Runs one-sided Jacobi on the columns of `x`, accumulating the right
/// rotations into `v`. On return the columns of `x` are mutually orthogonal
/// to working precision.
fn jacobi_sweeps(x: &mut DenseMatrix, v: &mut DenseMatrix) -> Result<usize> {
    let (m, n) = x.shape();
    let tol = f64::EPSILON * (m as f64).sqrt();
    let mut norms: Vec<f64> = (0..n).map(|j| dot(x.col(j), x.col(j))).collect();
    for sweep in 1..=MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..n.saturating_sub(1) {
            for j in i + 1..n {
                let (alpha, beta) = (norms[i], norms[j]);
                if alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                let gamma = {
                    let (xi, xj) = x.col_pair_mut(i, j);
                    dot(xi, xj)
                };
                if gamma.abs() <= tol * (alpha.sqrt() * beta.sqrt()) {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(x, i, j, c, s);
                rotate(v, i, j, c, s);
                norms[i] = alpha - t * gamma;
                norms[j] = beta + t * gamma;
            }
        }
        // The cached norms drift under repeated updates; refresh once per
        // sweep so the convergence test stays honest.
        for (j, nj) in norms.iter_mut().enumerate() {
            *nj = dot(x.col(j), x.col(j));
        }
        if !rotated {
            return Ok(sweep);
        }
    }
    Err(Error::NoConvergence {
        sweeps: MAX_SWEEPS,
    })
}

/// Applies the plane rotation `[c s; −s c]` to columns `i`, `j`.
#[inline]
fn rotate(m: &mut DenseMatrix, i: usize, j: usize, c: f64, s: f64) {
    let (xi, xj) = m.col_pair_mut(i, j);
    for (a, b) in xi.iter_mut().zip(xj.iter_mut()) {
        let (p, q) = (*a, *b);
        *a = c * p - s * q;
        *b = s * p + c * q;
    }
}

/// Fills the columns of `u` flagged in `missing` with unit vectors
/// orthogonal to every other column (Gram–Schmidt against the standard
/// basis, twice for stability).
fn complete_columns(u: &mut DenseMatrix, missing: &[bool]) {
    let m = u.rows();
    let mut candidate = 0;
    for j in 0..u.cols() {
        if !missing[j] {
            continue;
        }
        loop {
            assert!(candidate < m, "cannot complete basis");
            let mut e = vec![0.0; m];
            e[candidate] = 1.0;
            candidate += 1;
            for _ in 0..2 {
                for l in 0..u.cols() {
                    if l == j || (missing[l] && l > j) {
                        continue;
                    }
                    let c = dot(u.col(l), &e);
                    for (ei, ui) in e.iter_mut().zip(u.col(l)) {
                        *ei -= c * ui;
                    }
                }
            }
            let nrm = vec_norm(&e);
            if nrm > 0.5 {
                for (dst, x) in u.col_mut(j).iter_mut().zip(&e) {
                    *dst = x / nrm;
                }
                break;
            }
        }
    }
}

fn svd_tall(a: &DenseMatrix) -> Result<SvdFactors> {
    let n = a.cols();
    let qr = qr_pivoted(a)?;
    let perm = qr.perm.expect("pivoted QR carries a permutation");
    // X = Rᵀ is n×n since m ≥ n.
    let mut x = qr.r.transpose();
    let mut vx = DenseMatrix::identity(n);
    jacobi_sweeps(&mut x, &mut vx)?;

    let mut sigma: Vec<f64> = (0..n).map(|j| vec_norm(x.col(j))).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| sigma[j].total_cmp(&sigma[i]).then(i.cmp(&j)));

    let mut ux = DenseMatrix::zeros(n, n);
    let mut missing = vec![false; n];
    let mut vx_sorted = DenseMatrix::zeros(n, n);
    let sorted_sigma: Vec<f64> = order.iter().map(|&j| sigma[j]).collect();
    for (dst, &src) in order.iter().enumerate() {
        vx_sorted.col_mut(dst).copy_from_slice(vx.col(src));
        let s = sigma[src];
        if s > 0.0 && s.is_normal() {
            for (d, xv) in ux.col_mut(dst).iter_mut().zip(x.col(src)) {
                *d = xv / s;
            }
        } else {
            missing[dst] = true;
        }
    }
    sigma = sorted_sigma;
    for (s, miss) in sigma.iter_mut().zip(&missing) {
        if *miss {
            *s = 0.0;
        }
    }
    complete_columns(&mut ux, &missing);

    let u = qr.q.matmul(&vx_sorted);
    let v = ux.permute_rows_by(&perm);
    Ok(SvdFactors { u, sigma, v })
}

/// Thin SVD of `a`. Inputs with more columns than rows are handled through
/// the transpose.
pub fn svd(a: &DenseMatrix) -> Result<SvdFactors> {
    validate(a)?;
    if a.rows() >= a.cols() {
        svd_tall(a)
    } else {
        let t = svd_tall(&a.transpose())?;
        Ok(SvdFactors {
            u: t.v,
            sigma: t.sigma,
            v: t.u,
        })
    }
}

/// Singular values only, non-increasing.
pub fn singular_values(a: &DenseMatrix) -> Result<Vec<f64>> {
    // The vectors come almost for free with Jacobi; no separate path.
    Ok(svd(a)?.sigma)
}

/// Numerical-rank tolerance `max(m, n) · ε · σ₁`.
pub fn rank_tolerance(rows: usize, cols: usize, sigma_max: f64) -> f64 {
    rows.max(cols) as f64 * f64::EPSILON * sigma_max
}

/// Orthonormal basis for the column span of `a`.
///
/// Left singular vectors whose singular value exceeds
/// `max(m, n) · ε · σ₁` are kept, so the column count equals the numerical
/// rank of `a`.
pub fn orth(a: &DenseMatrix) -> Result<DenseMatrix> {
    validate(a)?;
    let f = svd(a)?;
    let sigma_max = f.sigma.first().copied().unwrap_or(0.0);
    if sigma_max == 0.0 {
        return Err(Error::EmptyBasis);
    }
    let tol = rank_tolerance(a.rows(), a.cols(), sigma_max);
    let rank = f.sigma.iter().take_while(|&&s| s > tol).count();
    Ok(f.u.columns(0..rank))
}

/// Moore–Penrose pseudoinverse via the SVD, with the same rank threshold as
/// [`orth`].
pub fn pseudoinverse(a: &DenseMatrix) -> Result<DenseMatrix> {
    let f = svd(a)?;
    let sigma_max = f.sigma.first().copied().unwrap_or(0.0);
    let tol = rank_tolerance(a.rows(), a.cols(), sigma_max);
    let inv: Vec<f64> = f
        .sigma
        .iter()
        .map(|&s| if s > tol && s > 0.0 { 1.0 / s } else { 0.0 })
        .collect();
    Ok(f.v.scale_cols(&inv).matmul_t(&f.u))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_matrix_has_orthonormal_factors() {
        let f = svd(&DenseMatrix::zeros(4, 3)).unwrap();
        assert_eq!(f.sigma, vec![0.0; 3]);
        assert!(f.u.orthonormality_defect() < 1e-14);
        assert!(f.v.orthonormality_defect() < 1e-14);
    }

    #[test]
    fn wide_input_goes_through_transpose() {
        let a = DenseMatrix::from_rows(&[[1.0, 2.0, 3.0], [4.0, 5.0, 6.5]]).unwrap();
        let f = svd(&a).unwrap();
        assert_eq!(f.u.shape(), (2, 2));
        assert_eq!(f.v.shape(), (3, 2));
        assert!(f.reconstruct().sub(&a).frobenius_norm() < 1e-13);
    }

    #[test]
    fn orth_of_zero_is_an_error() {
        assert!(matches!(
            orth(&DenseMatrix::zeros(3, 2)),
            Err(Error::EmptyBasis)
        ));
    }

    #[test]
    fn pseudoinverse_of_full_row_rank() {
        let a = DenseMatrix::from_rows(&[[1.0, 0.0, 2.0], [0.0, 3.0, 1.0]]).unwrap();
        let pinv = pseudoinverse(&a).unwrap();
        let id = a.matmul(&pinv);
        assert!(id.sub(&DenseMatrix::identity(2)).max_abs() < 1e-13);
    }
}
