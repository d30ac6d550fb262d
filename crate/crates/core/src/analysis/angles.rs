use crate::error::{Error, Result};
use crate::matcore::{singular_values, DenseMatrix};

const ORTHONORMAL_TOL: f64 = 1e-8;

/// Sines (ascending) and cosines (descending) of the principal angles
/// between two subspaces; entry `i` of each refers to the same angle.
#[derive(Clone, Debug, PartialEq)]
pub struct PrincipalAngles {
    pub sines: Vec<f64>,
    pub cosines: Vec<f64>,
}

impl PrincipalAngles {
    pub fn len(&self) -> usize {
        self.sines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sines.is_empty()
    }

    /// Largest sine, the spectral-norm distance.
    pub fn max_sine(&self) -> f64 {
        self.sines.last().copied().unwrap_or(0.0)
    }

    /// Root-sum-square of the sines.
    pub fn frobenius_sine(&self) -> f64 {
        crate::matcore::vec_norm(&self.sines)
    }

    /// `sin θ_i / cos θ_i`, infinite at right angles.
    pub fn tangents(&self) -> Vec<f64> {
        self.sines
            .iter()
            .zip(&self.cosines)
            .map(|(s, c)| if *c > 0.0 { s / c } else { f64::INFINITY })
            .collect()
    }
}

/// Principal angles between `range(x)` and `range(y)`, both given by
/// orthonormal columns.
///
/// Cosines are the singular values of `xᵀ y`. Sines are the singular values
/// of `(I − x xᵀ) y` when `x` is at least as wide as `y`, otherwise of
/// `(I − y yᵀ) x`. There are `min(cols)` of each.
pub fn principal_angles(x: &DenseMatrix, y: &DenseMatrix) -> Result<PrincipalAngles> {
    if x.rows() != y.rows() {
        return Err(Error::Validation(format!(
            "bases live in different spaces ({} vs {} rows)",
            x.rows(),
            y.rows()
        )));
    }
    if x.cols() == 0 || y.cols() == 0 {
        return Err(Error::Validation("bases must have at least one column".into()));
    }
    for (name, b) in [("x", x), ("y", y)] {
        b.check_finite()?;
        let defect = b.orthonormality_defect();
        if defect > ORTHONORMAL_TOL {
            return Err(Error::Validation(format!(
                "{name} is not orthonormal (defect {defect:e})"
            )));
        }
    }
    let (wide, narrow) = if x.cols() >= y.cols() { (x, y) } else { (y, x) };
    let count = narrow.cols();

    let mut cosines = singular_values(&wide.t_matmul(narrow))?;
    cosines.truncate(count);
    cosines.iter_mut().for_each(|c| *c = c.clamp(0.0, 1.0));

    let residual = narrow.sub(&wide.matmul(&wide.t_matmul(narrow)));
    let mut sines = singular_values(&residual)?;
    sines.truncate(count);
    sines.iter_mut().for_each(|s| *s = s.clamp(0.0, 1.0));
    sines.reverse();

    Ok(PrincipalAngles { sines, cosines })
}
