//! Householder QR factorizations.
//!
//! The unpivoted path is blocked: each panel of `BLOCK` columns is factored
//! with level-2 reflections and the trailing matrix is updated with the
//! compact WY representation `I − V T Vᵀ` through GEMM. The column-pivoted
//! path cannot defer its trailing update (every step needs downdated column
//! norms to choose the next pivot), so it stays unblocked.

use super::matrix::{axpy, dot, gemm_into, vec_norm, DenseMatrix, Op, View};
use crate::error::{Error, Result};

const BLOCK: usize = 32;

/// Thin QR factors.
///
/// For an `m×n` input with `p = min(m, n)`, `q` is `m×p` with orthonormal
/// columns and `r` is `p×n` upper trapezoidal (square when `m ≥ n`) with a
/// nonnegative diagonal. `perm` is set only for column-pivoted QR, in which
/// case `a.permute_cols(perm) = q r`.
#[derive(Clone, Debug)]
pub struct QrFactors {
    pub q: DenseMatrix,
    pub r: DenseMatrix,
    pub perm: Option<Vec<usize>>,
}

/// Reflectors stored LAPACK style: `v_j` below the diagonal of `packed`
/// (with an implicit unit leading entry), `tau_j` in `taus`.
struct Reflectors {
    packed: DenseMatrix,
    taus: Vec<f64>,
}

pub(crate) fn validate(a: &DenseMatrix) -> Result<()> {
    if a.rows() == 0 || a.cols() == 0 {
        return Err(Error::Validation(format!(
            "matrix must be non-empty, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    a.check_finite()
}

/// Generates a reflector `H = I − τ v vᵀ` with `H x = β e₁` and stores `v`
/// in `x[1..]`, `β` in `x[0]`. Returns `τ`.
fn make_reflector(x: &mut [f64]) -> f64 {
    let alpha = x[0];
    let xnorm = vec_norm(&x[1..]);
    if xnorm == 0.0 {
        return 0.0;
    }
    let beta = -alpha.signum() * alpha.hypot(xnorm);
    let beta = if beta == 0.0 { xnorm } else { beta };
    let tau = (beta - alpha) / beta;
    let inv = 1.0 / (alpha - beta);
    x[1..].iter_mut().for_each(|v| *v *= inv);
    x[0] = beta;
    tau
}

/// Applies `I − τ v vᵀ` to `c`, where `v = [1; v_tail]`.
#[inline]
fn apply_reflector(tau: f64, v_tail: &[f64], c: &mut [f64]) {
    if tau == 0.0 {
        return;
    }
    let w = c[0] + dot(v_tail, &c[1..]);
    c[0] -= tau * w;
    axpy(-tau * w, v_tail, &mut c[1..]);
}

/// Explicit unit-lower-trapezoidal `V` for reflectors `j0..j0+jb`,
/// restricted to rows `j0..m`.
fn block_v(packed: &DenseMatrix, j0: usize, jb: usize) -> DenseMatrix {
    let m = packed.rows();
    let mut v = DenseMatrix::zeros(m - j0, jb);
    for jj in 0..jb {
        let j = j0 + jj;
        let col = v.col_mut(jj);
        col[jj] = 1.0;
        col[jj + 1..].copy_from_slice(&packed.col(j)[j + 1..]);
    }
    v
}

/// Upper-triangular `T` with `H_1 ⋯ H_jb = I − V T Vᵀ` for the reflectors
/// in `v` with coefficients `taus`.
fn block_t(v: &DenseMatrix, taus: &[f64]) -> DenseMatrix {
    let jb = v.cols();
    let mut t = DenseMatrix::zeros(jb, jb);
    for i in 0..jb {
        let tau = taus[i];
        t[(i, i)] = tau;
        if i == 0 || tau == 0.0 {
            continue;
        }
        let vi = v.col(i);
        let z: Vec<f64> = (0..i).map(|l| -tau * dot(v.col(l), vi)).collect();
        for r in 0..i {
            t[(r, i)] = (r..i).map(|l| t[(r, l)] * z[l]).sum();
        }
    }
    t
}

impl Reflectors {
    /// Forms the first `ncols` columns of `H_0 H_1 ⋯ H_{p−1}`.
    fn form_q(&self, ncols: usize) -> DenseMatrix {
        let m = self.packed.rows();
        let p = self.taus.len();
        let mut q = DenseMatrix::eye(m, ncols);
        let starts: Vec<usize> = (0..p).step_by(BLOCK).collect();
        for &j0 in starts.iter().rev() {
            let jb = BLOCK.min(p - j0);
            let v = block_v(&self.packed, j0, jb);
            let t = block_t(&v, &self.taus[j0..j0 + jb]);
            // Columns before j0 are still unit vectors e_c with c < j0 and are
            // untouched by reflectors acting on rows j0..m.
            let cols = j0..ncols;
            let mut w = DenseMatrix::zeros(jb, cols.len());
            gemm_into(
                1.0,
                View::of(&v, Op::T),
                View::block(&q, Op::N, j0..m, cols.clone()),
                0.0,
                &mut w,
                0..jb,
                0..cols.len(),
            );
            let tw = t.matmul(&w);
            gemm_into(-1.0, View::of(&v, Op::N), View::of(&tw, Op::N), 1.0, &mut q, j0..m, cols);
        }
        q
    }

    fn upper(&self) -> DenseMatrix {
        let (m, n) = self.packed.shape();
        let p = m.min(n);
        let mut r = DenseMatrix::zeros(p, n);
        for j in 0..n {
            let top = (j + 1).min(p);
            r.col_mut(j)[..top].copy_from_slice(&self.packed.col(j)[..top]);
        }
        r
    }
}

fn householder_blocked(a: &DenseMatrix) -> Reflectors {
    let (m, n) = a.shape();
    let p = m.min(n);
    let mut w = a.clone();
    let mut taus = vec![0.0; p];
    let mut j0 = 0;
    while j0 < p {
        let jb = BLOCK.min(p - j0);
        for j in j0..j0 + jb {
            let tau = make_reflector(&mut w.col_mut(j)[j..]);
            taus[j] = tau;
            for c in j + 1..j0 + jb {
                let (vcol, ccol) = w.col_pair_mut(j, c);
                apply_reflector(tau, &vcol[j + 1..], &mut ccol[j..]);
            }
        }
        if j0 + jb < n {
            let v = block_v(&w, j0, jb);
            let t = block_t(&v, &taus[j0..j0 + jb]);
            // C ← (I − V Tᵀ Vᵀ) C on the trailing block.
            let cols = j0 + jb..n;
            let mut vc = DenseMatrix::zeros(jb, cols.len());
            gemm_into(
                1.0,
                View::of(&v, Op::T),
                View::block(&w, Op::N, j0..m, cols.clone()),
                0.0,
                &mut vc,
                0..jb,
                0..cols.len(),
            );
            let tvc = t.t_matmul(&vc);
            gemm_into(-1.0, View::of(&v, Op::N), View::of(&tvc, Op::N), 1.0, &mut w, j0..m, cols);
        }
        j0 += jb;
    }
    Reflectors { packed: w, taus }
}

/// Flips signs so that `diag(r) ≥ 0`; `q` columns are flipped to match.
fn normalize_signs(q: &mut DenseMatrix, r: &mut DenseMatrix) {
    for i in 0..r.rows().min(r.cols()) {
        if r[(i, i)] < 0.0 {
            for j in i..r.cols() {
                r[(i, j)] = -r[(i, j)];
            }
            q.col_mut(i).iter_mut().for_each(|x| *x = -*x);
        }
    }
}

/// Reduced QR factorization `a = q r` by Householder reflections.
pub fn qr_unpivoted(a: &DenseMatrix) -> Result<QrFactors> {
    validate(a)?;
    let refl = householder_blocked(a);
    let p = a.rows().min(a.cols());
    let mut q = refl.form_q(p);
    let mut r = refl.upper();
    normalize_signs(&mut q, &mut r);
    Ok(QrFactors { q, r, perm: None })
}

/// Column-pivoted QR `a Π = q r` (Businger–Golub).
///
/// At each step the remaining column with the largest residual 2-norm is
/// moved to the front; ties go to the smallest original column index. Column
/// norms are downdated and recomputed when cancellation makes the downdate
/// unreliable.
pub fn qr_pivoted(a: &DenseMatrix) -> Result<QrFactors> {
    validate(a)?;
    let (m, n) = a.shape();
    let p = m.min(n);
    let mut w = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut vn1: Vec<f64> = (0..n).map(|j| vec_norm(w.col(j))).collect();
    let mut vn2 = vn1.clone();
    let mut taus = vec![0.0; p];
    let tol3z = f64::EPSILON.sqrt();

    for j in 0..p {
        let mut piv = j;
        for l in j + 1..n {
            if vn1[l] > vn1[piv] || (vn1[l] == vn1[piv] && perm[l] < perm[piv]) {
                piv = l;
            }
        }
        if piv != j {
            w.swap_cols(j, piv);
            perm.swap(j, piv);
            vn1.swap(j, piv);
            vn2.swap(j, piv);
        }

        let tau = make_reflector(&mut w.col_mut(j)[j..]);
        taus[j] = tau;
        for c in j + 1..n {
            let (vcol, ccol) = w.col_pair_mut(j, c);
            apply_reflector(tau, &vcol[j + 1..], &mut ccol[j..]);
        }

        for l in j + 1..n {
            if vn1[l] == 0.0 {
                continue;
            }
            let ratio = w[(j, l)].abs() / vn1[l];
            let temp = (1.0 - ratio * ratio).max(0.0);
            let temp2 = temp * (vn1[l] / vn2[l]).powi(2);
            if temp2 <= tol3z {
                let fresh = if j + 1 < m { vec_norm(&w.col(l)[j + 1..]) } else { 0.0 };
                vn1[l] = fresh;
                vn2[l] = fresh;
            } else {
                vn1[l] *= temp.sqrt();
            }
        }
    }

    let refl = Reflectors { packed: w, taus };
    let mut q = refl.form_q(p);
    let mut r = refl.upper();
    normalize_signs(&mut q, &mut r);
    Ok(QrFactors {
        q,
        r,
        perm: Some(perm),
    })
}

/// Orthonormal basis for the orthogonal complement of the column span of
/// `u` (assumed to have orthonormal columns). Returns an `m×(m−r)` matrix.
pub fn orthonormal_complement(u: &DenseMatrix) -> Result<DenseMatrix> {
    let (m, r) = u.shape();
    if r >= m {
        return Ok(DenseMatrix::zeros(m, 0));
    }
    if r == 0 {
        return Ok(DenseMatrix::identity(m));
    }
    validate(u)?;
    let refl = householder_blocked(u);
    let full = refl.form_q(m);
    Ok(full.columns(r..m))
}

/// Orthonormal basis of `a`'s columns from Householder QR, always returning
/// `min(m, n)` columns.
///
/// This is the sketch orthonormalizer used inside the randomized
/// factorizations. When `a` is rank deficient the trailing columns complete
/// the basis with directions orthogonal to the leading ones rather than being
/// dropped. Fails only when `a` is numerically zero.
pub fn orth_householder(a: &DenseMatrix) -> Result<DenseMatrix> {
    validate(a)?;
    if a.max_abs() == 0.0 {
        return Err(Error::EmptyBasis);
    }
    let refl = householder_blocked(a);
    Ok(refl.form_q(a.rows().min(a.cols())))
}
