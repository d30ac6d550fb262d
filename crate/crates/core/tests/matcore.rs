use proptest::prelude::*;
use ruqlp::matcore::{
    matrix_norm, orth, qr_pivoted, qr_unpivoted, singular_values, spectral_norm, svd, DenseMatrix, NormKind,
};
use ruqlp::randfact::seeded_gaussian;

/// Eigenvalues of a symmetric matrix by cyclic two-sided Jacobi rotations.
/// Shares no code with the library SVD.
fn symmetric_eigenvalues(mut s: Vec<Vec<f64>>) -> Vec<f64> {
    let n = s.len();
    for _ in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| s[i][j] * s[i][j])
            .sum();
        if off.sqrt() < 1e-15 * (0..n).map(|i| s[i][i].abs()).fold(0.0, f64::max) {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if s[p][q] == 0.0 {
                    continue;
                }
                let theta = (s[q][q] - s[p][p]) / (2.0 * s[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * c;
                for k in 0..n {
                    let (a, b) = (s[k][p], s[k][q]);
                    s[k][p] = c * a - sn * b;
                    s[k][q] = sn * a + c * b;
                }
                for k in 0..n {
                    let (a, b) = (s[p][k], s[q][k]);
                    s[p][k] = c * a - sn * b;
                    s[q][k] = sn * a + c * b;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| s[i][i]).collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    ev
}

fn gram(a: &DenseMatrix) -> Vec<Vec<f64>> {
    let n = a.cols();
    (0..n)
        .map(|i| (0..n).map(|j| (0..a.rows()).map(|r| a[(r, i)] * a[(r, j)]).sum()).collect())
        .collect()
}

fn rel_residual(a: &DenseMatrix, b: &DenseMatrix) -> f64 {
    a.sub(b).frobenius_norm() / a.frobenius_norm()
}

#[test]
fn qr_of_identity_is_identity() {
    let f = qr_unpivoted(&DenseMatrix::identity(2)).unwrap();
    assert_eq!(f.q, DenseMatrix::identity(2));
    assert_eq!(f.r, DenseMatrix::identity(2));
}

#[test]
fn qr_of_positive_diagonal_keeps_it() {
    let a = DenseMatrix::from_diag(&[2.0, 3.0]);
    let f = qr_unpivoted(&a).unwrap();
    assert!(f.q.sub(&DenseMatrix::identity(2)).max_abs() < 1e-15);
    assert!(f.r.sub(&a).max_abs() < 1e-15);
}

#[test]
fn qr_gaussian_residual_and_orthonormality() {
    let a = seeded_gaussian(6, 4, 1);
    let f = qr_unpivoted(&a).unwrap();
    assert!(rel_residual(&a, &f.q.matmul(&f.r)) <= 1e-12);
    assert!(f.q.orthonormality_defect() <= 1e-12);
    assert!(f.r.is_upper_triangular());
    assert!(f.r.diag().iter().all(|&d| d >= 0.0));
}

#[test]
fn pivoted_qr_orders_by_column_norm() {
    let a = DenseMatrix::from_diag(&[1.0, 3.0, 2.0]);
    let f = qr_pivoted(&a).unwrap();
    assert_eq!(f.perm.as_deref(), Some(&[1, 2, 0][..]));
    let d = f.r.diag();
    for (x, want) in d.iter().zip([3.0, 2.0, 1.0]) {
        assert!((x.abs() - want).abs() < 1e-15);
    }
}

#[test]
fn pivoted_qr_ties_keep_original_order() {
    let f = qr_pivoted(&DenseMatrix::identity(3)).unwrap();
    assert_eq!(f.perm.as_deref(), Some(&[0, 1, 2][..]));
}

#[test]
fn pivoted_qr_gaussian() {
    let a = seeded_gaussian(8, 5, 7);
    let f = qr_pivoted(&a).unwrap();
    let perm = f.perm.clone().unwrap();
    assert!(rel_residual(&a.permute_cols(&perm), &f.q.matmul(&f.r)) <= 1e-12);
    let d: Vec<f64> = f.r.diag().iter().map(|x| x.abs()).collect();
    assert!(d.windows(2).all(|w| w[0] >= w[1]));
    let max_col = (0..5).map(|j| ruqlp::matcore::vec_norm(a.col(j))).fold(0.0, f64::max);
    assert!((d[0] - max_col).abs() <= 1e-14 * max_col);
}

#[test]
fn svd_of_diagonal() {
    let f = svd(&DenseMatrix::from_diag(&[3.0, 1.0])).unwrap();
    assert_eq!(f.sigma, vec![3.0, 1.0]);
    for m in [&f.u, &f.v] {
        assert!((m[(0, 0)].abs() - 1.0).abs() < 1e-15 && (m[(1, 1)].abs() - 1.0).abs() < 1e-15);
        assert!(m[(0, 1)].abs() < 1e-15 && m[(1, 0)].abs() < 1e-15);
    }
}

#[test]
fn svd_of_rank_one() {
    let u = [0.6, 0.8, 0.0];
    let v = [0.0, 1.0 / 2f64.sqrt(), -1.0 / 2f64.sqrt(), 0.0];
    let a = DenseMatrix::from_fn(3, 4, |i, j| u[i] * v[j]);
    let s = singular_values(&a).unwrap();
    assert!((s[0] - 1.0).abs() < 1e-14);
    assert!(s[1..].iter().all(|x| x.abs() < 1e-14));
}

#[test]
fn svd_matches_independent_eigensolver() {
    let a = seeded_gaussian(10, 7, 3);
    let s = singular_values(&a).unwrap();
    let ev = symmetric_eigenvalues(gram(&a));
    for (x, e) in s.iter().zip(ev) {
        assert!((x - e.sqrt()).abs() <= 1e-10 * x, "{x} vs {}", e.sqrt());
    }
}

#[test]
fn svd_eckart_young() {
    let a = seeded_gaussian(12, 9, 5);
    let f = svd(&a).unwrap();
    assert!(f.u.orthonormality_defect() < 1e-13);
    assert!(f.v.orthonormality_defect() < 1e-13);
    for r in 0..f.sigma.len() {
        let gap = spectral_norm(&a.sub(&f.truncated(r)));
        let want = f.sigma.get(r).copied().unwrap_or(0.0);
        assert!((gap - want).abs() <= 1e-10 * f.sigma[0], "r={r}: {gap} vs {want}");
    }
}

#[test]
fn orth_of_orthonormal_keeps_projector() {
    let a = qr_unpivoted(&seeded_gaussian(9, 3, 8)).unwrap().q;
    let b = orth(&a).unwrap();
    assert!(b.projector().sub(&a.projector()).frobenius_norm() <= 1e-12);
}

#[test]
fn orth_normalizes_single_column() {
    let b = orth(&DenseMatrix::from_rows(&[[3.0], [4.0]]).unwrap()).unwrap();
    let s = b[(0, 0)].signum();
    assert!((b[(0, 0)] - 0.6 * s).abs() < 1e-15 && (b[(1, 0)] - 0.8 * s).abs() < 1e-15);
}

#[test]
fn orth_matches_svd_basis() {
    let a = seeded_gaussian(20, 5, 9);
    let b = orth(&a).unwrap();
    let u = svd(&a).unwrap().u;
    assert!(b.projector().sub(&u.projector()).frobenius_norm() <= 1e-12);
    // Independent check: the projector must fix every column of a.
    assert!(rel_residual(&a, &b.projector().matmul(&a)) < 1e-13);
}

#[test]
fn norms_of_diagonal_and_zero() {
    let d = DenseMatrix::from_diag(&[3.0, 4.0]);
    assert!((matrix_norm(&d, NormKind::Spectral) - 4.0).abs() < 1e-14);
    assert!((matrix_norm(&d, NormKind::Frobenius) - 5.0).abs() < 1e-14);
    let z = DenseMatrix::zeros(3, 2);
    assert_eq!(matrix_norm(&z, NormKind::Spectral), 0.0);
    assert_eq!(matrix_norm(&z, NormKind::Frobenius), 0.0);
}

#[test]
fn spectral_norm_matches_sigma_one() {
    let a = seeded_gaussian(15, 15, 2);
    let s1 = singular_values(&a).unwrap()[0];
    assert!((spectral_norm(&a) - s1).abs() <= 1e-10 * s1);
}

fn small_matrix() -> impl Strategy<Value = DenseMatrix> {
    (1usize..9, 1usize..9, any::<u64>()).prop_map(|(m, n, seed)| seeded_gaussian(m, n, seed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn qr_invariants(a in small_matrix()) {
        let m = a.rows();
        let f = qr_unpivoted(&a).unwrap();
        prop_assert!(f.q.orthonormality_defect() <= 64.0 * m as f64 * f64::EPSILON);
        prop_assert!(f.r.is_upper_triangular());
        prop_assert!(rel_residual(&a, &f.q.matmul(&f.r)) < 1e-12);
    }

    #[test]
    fn svd_invariants(a in small_matrix()) {
        let f = svd(&a).unwrap();
        prop_assert!(f.u.orthonormality_defect() < 1e-12);
        prop_assert!(f.v.orthonormality_defect() < 1e-12);
        prop_assert!(f.sigma.windows(2).all(|w| w[0] >= w[1]));
        prop_assert!(rel_residual(&a, &f.reconstruct()) < 1e-12);
    }

    #[test]
    fn spectral_below_frobenius(a in small_matrix()) {
        let s = matrix_norm(&a, NormKind::Spectral);
        let f = matrix_norm(&a, NormKind::Frobenius);
        prop_assert!(s <= f * (1.0 + 1e-14));
    }
}
