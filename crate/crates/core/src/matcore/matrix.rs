//! Column-major dense matrix storage.

use std::fmt;
use std::ops::Range;

use crate::error::{Error, Result};

/// A real, dense, column-major matrix.
///
/// Entry `(i, j)` lives at `data[i + j * rows]`. Zero-sized dimensions are
/// allowed so that empty blocks (e.g. a trailing partition with no rows) can be
/// represented; factorization routines reject them at their own boundary.
#[derive(Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    /// Thin identity: the first `cols` columns of `I_rows`.
    pub fn eye(rows: usize, cols: usize) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows.min(cols) {
            m[(i, i)] = 1.0;
        }
        m
    }

    /// Builds a matrix from column-major data, rejecting non-finite entries.
    pub fn from_col_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Validation(format!(
                "data length {} does not match {rows}x{cols}",
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|x| !x.is_finite()) {
            return Err(Error::Validation(format!(
                "non-finite entry at ({}, {})",
                pos % rows.max(1),
                pos / rows.max(1)
            )));
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from row slices. All rows must have equal length.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut m = Self::zeros(nrows, ncols);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != ncols {
                return Err(Error::Validation(format!(
                    "row {i} has {} entries, expected {ncols}",
                    row.len()
                )));
            }
            for (j, &x) in row.iter().enumerate() {
                m[(i, j)] = x;
            }
        }
        m.check_finite()?;
        Ok(m)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for j in 0..cols {
            for i in 0..rows {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &x) in diag.iter().enumerate() {
            m[(i, i)] = x;
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0 || self.cols == 0
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    #[inline]
    pub fn col(&self, j: usize) -> &[f64] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    #[inline]
    pub fn col_mut(&mut self, j: usize) -> &mut [f64] {
        &mut self.data[j * self.rows..(j + 1) * self.rows]
    }

    /// Mutable access to two distinct columns at once.
    pub fn col_pair_mut(&mut self, a: usize, b: usize) -> (&mut [f64], &mut [f64]) {
        assert!(a != b, "column pair must be distinct");
        let r = self.rows;
        if a < b {
            let (lo, hi) = self.data.split_at_mut(b * r);
            (&mut lo[a * r..(a + 1) * r], &mut hi[..r])
        } else {
            let (lo, hi) = self.data.split_at_mut(a * r);
            (&mut hi[..r], &mut lo[b * r..(b + 1) * r])
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            let (x, y) = self.col_pair_mut(a, b);
            x.swap_with_slice(y);
        }
    }

    pub fn check_finite(&self) -> Result<()> {
        match self.data.iter().position(|x| !x.is_finite()) {
            None => Ok(()),
            Some(pos) => Err(Error::Validation(format!(
                "non-finite entry at ({}, {})",
                pos % self.rows.max(1),
                pos / self.rows.max(1)
            ))),
        }
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for j in 0..self.cols {
            let c = self.col(j);
            for (i, &x) in c.iter().enumerate() {
                t.data[j + i * self.cols] = x;
            }
        }
        t
    }

    /// Copy of the columns in `range`.
    pub fn columns(&self, range: Range<usize>) -> Self {
        assert!(range.end <= self.cols);
        Self {
            rows: self.rows,
            cols: range.len(),
            data: self.data[range.start * self.rows..range.end * self.rows].to_vec(),
        }
    }

    /// Copy of the rows in `range`.
    pub fn row_block(&self, range: Range<usize>) -> Self {
        self.block(range, 0..self.cols)
    }

    pub fn block(&self, rows: Range<usize>, cols: Range<usize>) -> Self {
        assert!(rows.end <= self.rows && cols.end <= self.cols);
        let mut b = Self::zeros(rows.len(), cols.len());
        for (bj, j) in cols.enumerate() {
            b.col_mut(bj)
                .copy_from_slice(&self.col(j)[rows.clone()]);
        }
        b
    }

    /// Copy with columns reordered so that column `j` of the result is
    /// column `perm[j]` of `self`.
    pub fn permute_cols(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.cols);
        let mut out = Self::zeros(self.rows, self.cols);
        for (j, &p) in perm.iter().enumerate() {
            out.col_mut(j).copy_from_slice(self.col(p));
        }
        out
    }

    /// Applies the permutation matrix `Π` (with `Π e_j = e_{perm[j]}`) from
    /// the left: row `perm[j]` of the result is row `j` of `self`.
    pub fn permute_rows_by(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.rows);
        let mut out = Self::zeros(self.rows, self.cols);
        for j in 0..self.cols {
            let src = self.col(j);
            let dst = out.col_mut(j);
            for (i, &p) in perm.iter().enumerate() {
                dst[p] = src[i];
            }
        }
        out
    }

    pub fn diag(&self) -> Vec<f64> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }

    pub fn scale(&self, alpha: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| alpha * x).collect(),
        }
    }

    pub fn scale_in_place(&mut self, alpha: f64) {
        self.data.iter_mut().for_each(|x| *x *= alpha);
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in sub");
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in add");
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// `self += alpha * other`
    pub fn axpy(&mut self, alpha: f64, other: &Self) {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in axpy");
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += alpha * b;
        }
    }

    /// Square root of the sum of squared entries, with scaling against
    /// overflow.
    pub fn frobenius_norm(&self) -> f64 {
        vec_norm(&self.data)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
    }

    /// `self * other`
    pub fn matmul(&self, other: &Self) -> Self {
        gemm(Op::N, Op::N, self, other)
    }

    /// `selfᵀ * other`
    pub fn t_matmul(&self, other: &Self) -> Self {
        gemm(Op::T, Op::N, self, other)
    }

    /// `self * otherᵀ`
    pub fn matmul_t(&self, other: &Self) -> Self {
        gemm(Op::N, Op::T, self, other)
    }

    /// `self * diag(d)` (scales column `j` by `d[j]`).
    pub fn scale_cols(&self, d: &[f64]) -> Self {
        assert_eq!(d.len(), self.cols);
        let mut out = self.clone();
        for (j, &s) in d.iter().enumerate() {
            out.col_mut(j).iter_mut().for_each(|x| *x *= s);
        }
        out
    }

    pub fn is_lower_triangular(&self) -> bool {
        (0..self.cols).all(|j| (0..j.min(self.rows)).all(|i| self[(i, j)] == 0.0))
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.cols).all(|j| ((j + 1)..self.rows).all(|i| self[(i, j)] == 0.0))
    }

    /// `‖selfᵀ self − I‖_F`, the departure from orthonormal columns.
    pub fn orthonormality_defect(&self) -> f64 {
        let g = self.t_matmul(self);
        g.sub(&Self::identity(self.cols)).frobenius_norm()
    }

    /// Orthogonal projector `self selfᵀ` onto the column span (assumes
    /// orthonormal columns).
    pub fn projector(&self) -> Self {
        self.matmul_t(self)
    }
}

impl std::ops::Index<(usize, usize)> for DenseMatrix {
    type Output = f64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i + j * self.rows]
    }
}

impl std::ops::IndexMut<(usize, usize)> for DenseMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i + j * self.rows]
    }
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DenseMatrix {}x{} [", self.rows, self.cols)?;
        let show_rows = self.rows.min(8);
        let show_cols = self.cols.min(8);
        for i in 0..show_rows {
            write!(f, "  ")?;
            for j in 0..show_cols {
                write!(f, "{:>12.5e} ", self[(i, j)])?;
            }
            if show_cols < self.cols {
                write!(f, "...")?;
            }
            writeln!(f)?;
        }
        if show_rows < self.rows {
            writeln!(f, "  ...")?;
        }
        write!(f, "]")
    }
}

/// Euclidean norm of a slice, scaled to avoid overflow/underflow.
pub fn vec_norm(x: &[f64]) -> f64 {
    let scale = x.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return 0.0;
    }
    let ssq: f64 = x.iter().map(|v| (v / scale) * (v / scale)).sum();
    scale * ssq.sqrt()
}

#[inline]
pub fn dot(x: &[f64], y: &[f64]) -> f64 {
    debug_assert_eq!(x.len(), y.len());
    // Four accumulators lets the compiler vectorize without reassociating
    // a single serial sum.
    let mut acc = [0.0_f64; 4];
    let chunks = x.len() / 4;
    for c in 0..chunks {
        let b = 4 * c;
        acc[0] += x[b] * y[b];
        acc[1] += x[b + 1] * y[b + 1];
        acc[2] += x[b + 2] * y[b + 2];
        acc[3] += x[b + 3] * y[b + 3];
    }
    let mut s = (acc[0] + acc[1]) + (acc[2] + acc[3]);
    for i in 4 * chunks..x.len() {
        s += x[i] * y[i];
    }
    s
}

/// `y += alpha * x`
#[inline]
pub fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    debug_assert_eq!(x.len(), y.len());
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Op {
    N,
    T,
}

/// Strided read-only view used to hand sub-blocks to the GEMM kernel.
#[derive(Clone, Copy)]
pub(crate) struct View<'a> {
    pub data: &'a [f64],
    pub offset: usize,
    pub rows: usize,
    pub cols: usize,
    pub rs: isize,
    pub cs: isize,
}

impl<'a> View<'a> {
    pub fn of(m: &'a DenseMatrix, op: Op) -> Self {
        Self::block(m, op, 0..m.rows, 0..m.cols)
    }

    /// View of `m[rows, cols]`, optionally transposed.
    pub fn block(m: &'a DenseMatrix, op: Op, rows: Range<usize>, cols: Range<usize>) -> Self {
        let lda = m.rows as isize;
        let offset = rows.start + cols.start * m.rows;
        match op {
            Op::N => Self {
                data: &m.data,
                offset,
                rows: rows.len(),
                cols: cols.len(),
                rs: 1,
                cs: lda,
            },
            Op::T => Self {
                data: &m.data,
                offset,
                rows: cols.len(),
                cols: rows.len(),
                rs: lda,
                cs: 1,
            },
        }
    }
}

/// `C[rows, cols] = alpha * A * B + beta * C[rows, cols]` on a column-major
/// destination block.
pub(crate) fn gemm_into(
    alpha: f64,
    a: View<'_>,
    b: View<'_>,
    beta: f64,
    c: &mut DenseMatrix,
    c_rows: Range<usize>,
    c_cols: Range<usize>,
) {
    assert_eq!(a.cols, b.rows, "inner dimension mismatch");
    assert_eq!(a.rows, c_rows.len(), "row dimension mismatch");
    assert_eq!(b.cols, c_cols.len(), "column dimension mismatch");
    assert!(c_rows.end <= c.rows && c_cols.end <= c.cols);
    let (m, k, n) = (a.rows, a.cols, b.cols);
    if m == 0 || n == 0 {
        return;
    }
    let ldc = c.rows as isize;
    let c_off = c_rows.start + c_cols.start * c.rows;
    if k == 0 {
        for j in 0..n {
            for i in 0..m {
                let idx = c_off + i + j * c.rows;
                c.data[idx] *= beta;
            }
        }
        return;
    }
    // Bounds of the strided regions were validated against the owning
    // matrices above; the kernel only touches indices inside them.
    unsafe {
        matrixmultiply::dgemm(
            m,
            k,
            n,
            alpha,
            a.data.as_ptr().add(a.offset),
            a.rs,
            a.cs,
            b.data.as_ptr().add(b.offset),
            b.rs,
            b.cs,
            beta,
            c.data.as_mut_ptr().add(c_off),
            1,
            ldc,
        );
    }
}

pub(crate) fn gemm(op_a: Op, op_b: Op, a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    let va = View::of(a, op_a);
    let vb = View::of(b, op_b);
    assert_eq!(
        va.cols, vb.rows,
        "inner dimension mismatch: {}x{} times {}x{}",
        va.rows, va.cols, vb.rows, vb.cols
    );
    let mut c = DenseMatrix::zeros(va.rows, vb.cols);
    let (r, cc) = (c.rows, c.cols);
    gemm_into(1.0, va, vb, 0.0, &mut c, 0..r, 0..cc);
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_finite() {
        assert!(DenseMatrix::from_col_major(1, 2, vec![1.0, f64::NAN]).is_err());
        assert!(DenseMatrix::from_rows(&[[1.0, f64::INFINITY]]).is_err());
        assert!(DenseMatrix::from_col_major(2, 2, vec![1.0; 3]).is_err());
    }

    #[test]
    fn column_major_layout() {
        let m = DenseMatrix::from_rows(&[[1.0, 2.0], [3.0, 4.0], [5.0, 6.0]]).unwrap();
        assert_eq!(m.data(), &[1.0, 3.0, 5.0, 2.0, 4.0, 6.0]);
        assert_eq!(m.transpose().data(), &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
    }

    #[test]
    fn products_match_naive() {
        let a = DenseMatrix::from_fn(5, 3, |i, j| (i as f64) - 2.0 * (j as f64) + 0.5);
        let b = DenseMatrix::from_fn(3, 4, |i, j| (i * j) as f64 + 1.0);
        let c = a.matmul(&b);
        for i in 0..5 {
            for j in 0..4 {
                let want: f64 = (0..3).map(|l| a[(i, l)] * b[(l, j)]).sum();
                assert!((c[(i, j)] - want).abs() < 1e-12);
            }
        }
        let at = a.transpose();
        assert_eq!(at.t_matmul(&b), c);
        assert_eq!(a.matmul_t(&b.transpose()), c);
    }

    #[test]
    fn permutations_are_inverse_consistent() {
        let a = DenseMatrix::from_fn(3, 3, |i, j| (3 * i + j) as f64);
        let perm = [2, 0, 1];
        let ap = a.permute_cols(&perm);
        assert_eq!(ap.col(0), a.col(2));
        // (Π x)[perm[j]] = x[j]
        let x = DenseMatrix::from_col_major(3, 1, vec![10.0, 20.0, 30.0]).unwrap();
        let px = x.permute_rows_by(&perm);
        assert_eq!(px.data(), &[20.0, 30.0, 10.0]);
        // A Π x == (A Π) x
        let lhs = a.matmul(&px);
        let rhs = ap.matmul(&x);
        assert!(lhs.sub(&rhs).max_abs() < 1e-12);
    }

    #[test]
    fn norm_is_overflow_safe() {
        let big = DenseMatrix::from_rows(&[[1e200, 1e200]]).unwrap();
        assert!((big.frobenius_norm() - 2f64.sqrt() * 1e200).abs() / 1e200 < 1e-15);
    }
}
