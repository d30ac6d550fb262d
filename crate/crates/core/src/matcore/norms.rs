//! Matrix norms.
//!
//! The Frobenius norm is a scaled sum of squares. The spectral norm comes
//! from Lanczos on the Gram operator (`AᵀA` or `AAᵀ`, whichever is smaller)
//! with full reorthogonalization. Iteration stops once the largest Ritz
//! value `θ` satisfies either `r ≤ 1e-14 θ` or `r² / gap ≤ 1e-14 θ`, where `r`
//! is the Ritz residual and `gap` the distance to the next Ritz value. That
//! bounds the relative error of `σ₁ = √θ` by about `5e-15` (Ritz values
//! approach `λ_max` from below). When the Krylov space reaches the full
//! dimension the answer is exact up to rounding.

use super::matrix::{dot, vec_norm, DenseMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NormKind {
    Spectral,
    Frobenius,
}

impl NormKind {
    pub fn tag(self) -> &'static str {
        match self {
            NormKind::Spectral => "spectral",
            NormKind::Frobenius => "frobenius",
        }
    }
}

pub fn matrix_norm(a: &DenseMatrix, which: NormKind) -> f64 {
    match which {
        NormKind::Frobenius => a.frobenius_norm(),
        NormKind::Spectral => spectral_norm(a),
    }
}

const RITZ_TOL: f64 = 1e-14;

/// Largest singular value by Lanczos on the Gram operator.
pub fn spectral_norm(a: &DenseMatrix) -> f64 {
    let (m, n) = a.shape();
    if a.is_empty() {
        return 0.0;
    }
    let scale = a.max_abs();
    if scale == 0.0 {
        return 0.0;
    }
    // Work on a scaled copy so squares cannot overflow.
    let a = a.scale(1.0 / scale);
    let dim = m.min(n);
    let gram = |x: &[f64]| -> Vec<f64> {
        if m >= n {
            at_mul(&a, &a_mul(&a, x))
        } else {
            a_mul(&a, &at_mul(&a, x))
        }
    };

    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();

    // Deterministic start vector with no special alignment.
    let mut state: u64 = 0x9E37_79B9_7F4A_7C15;
    let mut v: Vec<f64> = (0..dim)
        .map(|_| {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            0.5 + (state >> 11) as f64 / (1u64 << 53) as f64
        })
        .collect();
    let nv = vec_norm(&v);
    v.iter_mut().for_each(|x| *x /= nv);

    let mut theta = 0.0;
    for j in 0..dim {
        let mut w = gram(&v);
        let aj = dot(&w, &v);
        alpha.push(aj);
        basis.push(v);
        for _ in 0..2 {
            for q in &basis {
                let c = dot(&w, q);
                w.iter_mut().zip(q).for_each(|(wi, qi)| *wi -= c * qi);
            }
        }
        let bj = vec_norm(&w);
        let k = alpha.len();
        theta = kth_largest(&alpha, &beta, 1);
        let converged = if j + 1 == dim || bj <= f64::EPSILON * theta.max(f64::MIN_POSITIVE) {
            true
        } else {
            let s_last = ritz_vector_last(&alpha, &beta, theta);
            let r = bj * s_last.abs();
            let gap = if k >= 2 {
                (theta - kth_largest(&alpha, &beta, 2) - r).max(0.0)
            } else {
                0.0
            };
            r <= RITZ_TOL * theta || (gap > 0.0 && r * r / gap <= RITZ_TOL * theta)
        };
        if converged {
            break;
        }
        beta.push(bj);
        v = w.into_iter().map(|x| x / bj).collect();
    }
    scale * theta.max(0.0).sqrt()
}

fn a_mul(a: &DenseMatrix, x: &[f64]) -> Vec<f64> {
    let mut y = vec![0.0; a.rows()];
    for (j, &xj) in x.iter().enumerate() {
        if xj != 0.0 {
            y.iter_mut().zip(a.col(j)).for_each(|(yi, aij)| *yi += xj * aij);
        }
    }
    y
}

fn at_mul(a: &DenseMatrix, y: &[f64]) -> Vec<f64> {
    (0..a.cols()).map(|j| dot(a.col(j), y)).collect()
}

/// Number of eigenvalues of the symmetric tridiagonal `(d, e)` below `x`.
fn sturm_count(d: &[f64], e: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0;
    for i in 0..d.len() {
        let off = if i == 0 { 0.0 } else { e[i - 1] * e[i - 1] };
        q = d[i] - x - if i == 0 { 0.0 } else { off / q };
        if q == 0.0 {
            q = -f64::EPSILON * (x.abs() + f64::MIN_POSITIVE);
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// `k`-th largest eigenvalue (1-based) of the symmetric tridiagonal with
/// diagonal `d` and off-diagonal `e`, by bisection.
fn kth_largest(d: &[f64], e: &[f64], k: usize) -> f64 {
    let n = d.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r = if i > 0 { e[i - 1].abs() } else { 0.0 }
            + if i + 1 < n { e[i].abs() } else { 0.0 };
        lo = lo.min(d[i] - r);
        hi = hi.max(d[i] + r);
    }
    let target = n - k; // number of eigenvalues strictly below the answer
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sturm_count(d, e, mid) > target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Last component of the unit eigenvector of the tridiagonal for eigenvalue
/// `theta`, by two steps of inverse iteration.
fn ritz_vector_last(d: &[f64], e: &[f64], theta: f64) -> f64 {
    let n = d.len();
    if n == 1 {
        return 1.0;
    }
    let shift = theta + f64::EPSILON * theta.abs().max(f64::MIN_POSITIVE) * 4.0;
    let mut x = vec![1.0; n];
    for _ in 0..2 {
        x = tridiag_solve(d, e, shift, &x);
        let nx = vec_norm(&x);
        if nx == 0.0 || !nx.is_finite() {
            return 1.0;
        }
        x.iter_mut().for_each(|v| *v /= nx);
    }
    x[n - 1]
}

/// Solves `(T − σ I) x = b` by Gaussian elimination with partial pivoting
/// (the tridiagonal analogue of LAPACK `dgtsv`).
fn tridiag_solve(d: &[f64], e: &[f64], sigma: f64, b: &[f64]) -> Vec<f64> {
    let n = d.len();
    let mut diag: Vec<f64> = d.iter().map(|x| x - sigma).collect();
    let mut sup: Vec<f64> = e.to_vec();
    let mut sub: Vec<f64> = e.to_vec();
    let mut sup2 = vec![0.0; n.saturating_sub(2)];
    let mut rhs = b.to_vec();
    let tiny = f64::MIN_POSITIVE.sqrt();
    for i in 0..n - 1 {
        if diag[i].abs() >= sub[i].abs() {
            if diag[i] == 0.0 {
                diag[i] = tiny;
            }
            let f = sub[i] / diag[i];
            diag[i + 1] -= f * sup[i];
            rhs[i + 1] -= f * rhs[i];
        } else {
            let f = diag[i] / sub[i];
            diag[i] = sub[i];
            let tmp = diag[i + 1];
            diag[i + 1] = sup[i] - f * tmp;
            if i + 2 < n {
                sup2[i] = sup[i + 1];
                sup[i + 1] *= -f;
            }
            sup[i] = tmp;
            rhs.swap(i, i + 1);
            rhs[i + 1] -= f * rhs[i];
        }
        sub[i] = 0.0;
    }
    if diag[n - 1] == 0.0 {
        diag[n - 1] = tiny;
    }
    let mut x = vec![0.0; n];
    x[n - 1] = rhs[n - 1] / diag[n - 1];
    if n >= 2 {
        x[n - 2] = (rhs[n - 2] - sup[n - 2] * x[n - 1]) / diag[n - 2];
    }
    for i in (0..n.saturating_sub(2)).rev() {
        x[i] = (rhs[i] - sup[i] * x[i + 1] - sup2[i] * x[i + 2]) / diag[i];
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tridiagonal_bisection_matches_closed_form() {
        // Eigenvalues of tridiag(-1, 2, -1) of order n: 2 − 2 cos(kπ/(n+1)).
        let n = 12;
        let d = vec![2.0; n];
        let e = vec![-1.0; n - 1];
        let top = 2.0 - 2.0 * (n as f64 * std::f64::consts::PI / (n as f64 + 1.0)).cos();
        assert!((kth_largest(&d, &e, 1) - top).abs() < 1e-14);
        let second = 2.0 - 2.0 * ((n - 1) as f64 * std::f64::consts::PI / (n as f64 + 1.0)).cos();
        assert!((kth_largest(&d, &e, 2) - second).abs() < 1e-14);
    }

    #[test]
    fn tridiagonal_solver_against_dense_product() {
        let d = [4.0, -1.0, 3.0, 0.5, 2.0];
        let e = [1.0, 2.0, -1.5, 0.25];
        let b = [1.0, 2.0, 3.0, 4.0, 5.0];
        let x = tridiag_solve(&d, &e, 0.3, &b);
        for i in 0..5 {
            let mut s = (d[i] - 0.3) * x[i];
            if i > 0 {
                s += e[i - 1] * x[i - 1];
            }
            if i < 4 {
                s += e[i] * x[i + 1];
            }
            assert!((s - b[i]).abs() < 1e-12, "row {i}: {s} vs {}", b[i]);
        }
    }

    #[test]
    fn diagonal_norms() {
        let a = DenseMatrix::from_diag(&[3.0, 4.0]);
        assert!((matrix_norm(&a, NormKind::Spectral) - 4.0).abs() < 1e-14);
        assert!((matrix_norm(&a, NormKind::Frobenius) - 5.0).abs() < 1e-14);
        let z = DenseMatrix::zeros(3, 2);
        assert_eq!(matrix_norm(&z, NormKind::Spectral), 0.0);
        assert_eq!(matrix_norm(&z, NormKind::Frobenius), 0.0);
    }
}
