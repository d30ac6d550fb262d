use super::config::OrthMethod;
use super::operator::MatrixOperator;
use crate::error::{Error, Result};
use crate::matcore::{orth_householder, svd, validate, DenseMatrix};

/// `P̄ ≈ range(Aᵀ)` from the Gaussian sketch `phi` with `q` rounds of power
/// iteration, using the default [`OrthMethod`].
pub fn pi_orth<O: MatrixOperator + ?Sized>(
    a: &O,
    phi: &DenseMatrix,
    q: usize,
    ortho_interval: usize,
) -> Result<DenseMatrix> {
    pi_orth_with(a, phi, q, ortho_interval, OrthMethod::default())
}

/// [`pi_orth`] with an explicit orthonormalization method.
///
/// Step 0 forms `orth(Aᵀ Φ)`. Half-steps `1..=2q` alternate `B = A P̄` and
/// `B = Aᵀ P̄`; the result is orthonormalized when the half-step index is a
/// multiple of `ortho_interval` and always on the last one.
pub fn pi_orth_with<O: MatrixOperator + ?Sized>(
    a: &O,
    phi: &DenseMatrix,
    q: usize,
    ortho_interval: usize,
    method: OrthMethod,
) -> Result<DenseMatrix> {
    let (m, n) = (a.nrows(), a.ncols());
    let d = phi.cols();
    if phi.rows() != m {
        return Err(Error::Validation(format!(
            "sketch has {} rows, operator has {m}",
            phi.rows()
        )));
    }
    if d == 0 || d > m.min(n) {
        return Err(Error::Config(format!(
            "sketch width {d} must lie in 1..={}",
            m.min(n)
        )));
    }
    if ortho_interval == 0 {
        return Err(Error::Config("ortho_interval must be at least 1".into()));
    }

    let last = 2 * q;
    let mut p = orthonormalize(&a.apply_transpose(phi), d, 0, method, last == 0)?;
    for h in 1..=last {
        let b = if h % 2 == 1 {
            a.apply(&p)
        } else {
            a.apply_transpose(&p)
        };
        p = if h % ortho_interval == 0 || h == last {
            orthonormalize(&b, d, h, method, h == last)?
        } else {
            if b.check_finite().is_err() {
                return Err(Error::DegenerateSketch {
                    step: h,
                    detail: "unnormalized power iterate overflowed".into(),
                });
            }
            b
        };
    }
    Ok(p)
}

fn orthonormalize(b: &DenseMatrix, d: usize, step: usize, method: OrthMethod, last: bool) -> Result<DenseMatrix> {
    let basis = match method {
        OrthMethod::Svd if last => singular_basis(b),
        _ => orth_householder(b),
    };
    match basis {
        Ok(u) if u.cols() == d => Ok(u),
        Ok(u) => Err(Error::DegenerateSketch {
            step,
            detail: format!("basis has {} of {d} columns", u.cols()),
        }),
        Err(Error::EmptyBasis) => Err(Error::DegenerateSketch {
            step,
            detail: "sketch is identically zero".into(),
        }),
        Err(Error::Validation(msg)) => Err(Error::DegenerateSketch { step, detail: msg }),
        Err(e) => Err(e),
    }
}

/// All `min(m, n)` left singular vectors of `b`, by non-increasing singular
/// value.
fn singular_basis(b: &DenseMatrix) -> Result<DenseMatrix> {
    validate(b)?;
    if b.max_abs() == 0.0 {
        return Err(Error::EmptyBasis);
    }
    Ok(svd(b)?.u)
}
