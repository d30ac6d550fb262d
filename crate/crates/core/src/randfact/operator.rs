use crate::matcore::DenseMatrix;

/// Something that can be multiplied against a block of vectors from either
/// side. The randomized factorizations only touch `A` through this trait,
/// which is what lets tests count passes over the data.
pub trait MatrixOperator {
    fn nrows(&self) -> usize;
    fn ncols(&self) -> usize;
    /// `A X` for `X` with `ncols()` rows.
    fn apply(&self, x: &DenseMatrix) -> DenseMatrix;
    /// `Aᵀ Y` for `Y` with `nrows()` rows.
    fn apply_transpose(&self, y: &DenseMatrix) -> DenseMatrix;
}

impl MatrixOperator for DenseMatrix {
    fn nrows(&self) -> usize {
        self.rows()
    }

    fn ncols(&self) -> usize {
        self.cols()
    }

    fn apply(&self, x: &DenseMatrix) -> DenseMatrix {
        self.matmul(x)
    }

    fn apply_transpose(&self, y: &DenseMatrix) -> DenseMatrix {
        self.t_matmul(y)
    }
}

impl<T: MatrixOperator + ?Sized> MatrixOperator for &T {
    fn nrows(&self) -> usize {
        (**self).nrows()
    }

    fn ncols(&self) -> usize {
        (**self).ncols()
    }

    fn apply(&self, x: &DenseMatrix) -> DenseMatrix {
        (**self).apply(x)
    }

    fn apply_transpose(&self, y: &DenseMatrix) -> DenseMatrix {
        (**self).apply_transpose(y)
    }
}
