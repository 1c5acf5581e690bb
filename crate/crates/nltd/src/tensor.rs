//! Dense small-tensor algebra: N-order tensors with a fixed memory layout,
//! mode-n unfolding/folding, n-mode products and Frobenius norms.
//!
//! Layout law: entry `(i_0, i_1, ..., i_{N-1})` lives at flat offset
//! `i_0 + i_1*I_0 + i_2*I_0*I_1 + ...` — the first index varies fastest.
//! Under this layout the mode-0 unfolding is a plain reshape, and the
//! mode-n unfolding maps entry `(i_0..i_{N-1})` to matrix element
//! `(i_n, j)` with `j = sum_{k != n} i_k * J_k`, `J_k = prod_{m<k, m!=n} I_m`.
//!
//! Matrices use the same column-major convention so a `Matrix` is exactly an
//! order-2 `Tensor`.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use num_complex::Complex64;

/// Dense N-order tensor with column-major ("first index fastest") storage.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor<T: Scalar = f64> {
    shape: Vec<usize>,
    data: Vec<T>,
}

/// Tensor with complex entries; carries the Fourier-domain groups and cores.
pub type ComplexTensor = Tensor<Complex64>;

impl<T: Scalar> Tensor<T> {
    /// Build a tensor from a shape and flat data in layout order.
    pub fn from_data(shape: &[usize], data: Vec<T>) -> Result<Self> {
        if shape.is_empty() || shape.iter().any(|&e| e == 0) {
            return Err(Error::DimensionMismatch(format!(
                "tensor shape must be non-empty with positive extents, got {shape:?}"
            )));
        }
        let len: usize = shape.iter().product();
        if data.len() != len {
            return Err(Error::DimensionMismatch(format!(
                "data length {} does not match shape {:?} (expects {})",
                data.len(),
                shape,
                len
            )));
        }
        Ok(Self {
            shape: shape.to_vec(),
            data,
        })
    }

    /// All-zero tensor of the given shape.
    pub fn zeros(shape: &[usize]) -> Self {
        let len: usize = shape.iter().product();
        assert!(
            !shape.is_empty() && shape.iter().all(|&e| e > 0),
            "tensor shape must be non-empty with positive extents, got {shape:?}"
        );
        Self {
            shape: shape.to_vec(),
            data: vec![T::ZERO; len],
        }
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn order(&self) -> usize {
        self.shape.len()
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [T] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<T> {
        self.data
    }

    /// Flat offset of a multi-index under the layout law.
    #[inline]
    pub fn offset(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.shape.len());
        let mut off = 0;
        let mut stride = 1;
        for (&i, &extent) in idx.iter().zip(&self.shape) {
            debug_assert!(i < extent);
            off += i * stride;
            stride *= extent;
        }
        off
    }

    #[inline]
    pub fn get(&self, idx: &[usize]) -> T {
        self.data[self.offset(idx)]
    }

    #[inline]
    pub fn set(&mut self, idx: &[usize], v: T) {
        let off = self.offset(idx);
        self.data[off] = v;
    }

    /// Frobenius norm: sqrt of the sum of squared entry moduli.
    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
    }

    fn check_mode(&self, mode: usize) -> Result<()> {
        if mode >= self.order() {
            return Err(Error::ModeOutOfRange {
                mode,
                order: self.order(),
            });
        }
        Ok(())
    }

    /// Extent product below / at / above `mode`, the (inner, extent, outer)
    /// decomposition used by unfold and the mode product.
    fn split(&self, mode: usize) -> (usize, usize, usize) {
        let inner: usize = self.shape[..mode].iter().product();
        let extent = self.shape[mode];
        let outer: usize = self.shape[mode + 1..].iter().product();
        (inner, extent, outer)
    }

    /// Mode-n matricization. Rows index mode `mode`; column `j` of entry
    /// `(i_0..i_{N-1})` is `sum_{k != n} i_k * J_k` with
    /// `J_k = prod_{m<k, m!=n} I_m`.
    pub fn unfold(&self, mode: usize) -> Result<Matrix<T>> {
        self.check_mode(mode)?;
        let (inner, extent, outer) = self.split(mode);
        let cols = inner * outer;
        let mut m = Matrix::zeros(extent, cols);
        for b in 0..outer {
            let slab = &self.data[b * inner * extent..(b + 1) * inner * extent];
            for i in 0..extent {
                let src = &slab[i * inner..(i + 1) * inner];
                for (a, &v) in src.iter().enumerate() {
                    // column j = a + b*inner, column-major destination
                    m.data[i + (a + b * inner) * extent] = v;
                }
            }
        }
        Ok(m)
    }

    /// Inverse of [`Tensor::unfold`]: rebuild a tensor of `shape` from its
    /// mode-`mode` matricization.
    pub fn fold(m: &Matrix<T>, mode: usize, shape: &[usize]) -> Result<Self> {
        if mode >= shape.len() {
            return Err(Error::ModeOutOfRange {
                mode,
                order: shape.len(),
            });
        }
        let mut t = Self::zeros(shape);
        let (inner, extent, outer) = t.split(mode);
        if m.rows != extent || m.cols != inner * outer {
            return Err(Error::DimensionMismatch(format!(
                "cannot fold {}x{} matrix into shape {:?} along mode {}",
                m.rows, m.cols, shape, mode
            )));
        }
        for b in 0..outer {
            let slab = &mut t.data[b * inner * extent..(b + 1) * inner * extent];
            for i in 0..extent {
                for a in 0..inner {
                    slab[i * inner + a] = m.data[i + (a + b * inner) * extent];
                }
            }
        }
        Ok(t)
    }

    /// n-mode product `self x_mode m`: the mode-`mode` extent contracts with
    /// `m.cols` and is replaced by `m.rows`, so that
    /// `unfold(result, mode) = m * unfold(self, mode)`.
    pub fn mode_product(&self, m: &Matrix<T>, mode: usize) -> Result<Self> {
        self.check_mode(mode)?;
        let (inner, extent, outer) = self.split(mode);
        if m.cols != extent {
            return Err(Error::DimensionMismatch(format!(
                "mode-{} product: matrix has {} cols but tensor extent is {}",
                mode, m.cols, extent
            )));
        }
        let mut shape = self.shape.clone();
        shape[mode] = m.rows;
        let mut out = Self::zeros(&shape);

        if inner == 1 {
            // Fibers are contiguous; use dot products against the rows of m,
            // pre-transposed so both streams are contiguous.
            let mt = m.transpose();
            for b in 0..outer {
                let src = &self.data[b * extent..(b + 1) * extent];
                let dst = &mut out.data[b * m.rows..(b + 1) * m.rows];
                for (r, d) in dst.iter_mut().enumerate() {
                    let row = &mt.data[r * extent..(r + 1) * extent];
                    let mut acc = T::ZERO;
                    for (&x, &w) in src.iter().zip(row) {
                        acc += w * x;
                    }
                    *d = acc;
                }
            }
        } else {
            // Each slab is an (inner x extent) column-major matrix; build the
            // output slab one column at a time as a weighted sum of source
            // columns.
            for b in 0..outer {
                let src = &self.data[b * inner * extent..(b + 1) * inner * extent];
                let dst = &mut out.data[b * inner * m.rows..(b + 1) * inner * m.rows];
                for r in 0..m.rows {
                    let dcol = &mut dst[r * inner..(r + 1) * inner];
                    for i in 0..extent {
                        let w = m.data[r + i * m.rows];
                        if w == T::ZERO {
                            continue;
                        }
                        let scol = &src[i * inner..(i + 1) * inner];
                        for (d, &s) in dcol.iter_mut().zip(scol) {
                            *d += w * s;
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// n-mode product with a real matrix. For complex tensors this avoids
    /// full complex multiplies (the weights only scale); for real tensors it
    /// is identical to [`Tensor::mode_product`].
    pub fn mode_product_real(&self, m: &Matrix<f64>, mode: usize) -> Result<Self> {
        self.check_mode(mode)?;
        let (inner, extent, outer) = self.split(mode);
        if m.cols() != extent {
            return Err(Error::DimensionMismatch(format!(
                "mode-{} product: matrix has {} cols but tensor extent is {}",
                mode,
                m.cols(),
                extent
            )));
        }
        let rows = m.rows();
        let mut shape = self.shape.clone();
        shape[mode] = rows;
        let mut out = Self::zeros(&shape);

        if inner == 1 {
            let mt = m.transpose();
            for b in 0..outer {
                let src = &self.data[b * extent..(b + 1) * extent];
                let dst = &mut out.data[b * rows..(b + 1) * rows];
                for (r, d) in dst.iter_mut().enumerate() {
                    let row = &mt.data()[r * extent..(r + 1) * extent];
                    let mut acc = T::ZERO;
                    for (&x, &w) in src.iter().zip(row) {
                        acc += x.scale(w);
                    }
                    *d = acc;
                }
            }
        } else {
            for b in 0..outer {
                let src = &self.data[b * inner * extent..(b + 1) * inner * extent];
                let dst = &mut out.data[b * inner * rows..(b + 1) * inner * rows];
                for r in 0..rows {
                    let dcol = &mut dst[r * inner..(r + 1) * inner];
                    for i in 0..extent {
                        let w = m.get(r, i);
                        if w == 0.0 {
                            continue;
                        }
                        let scol = &src[i * inner..(i + 1) * inner];
                        for (d, &s) in dcol.iter_mut().zip(scol) {
                            *d += s.scale(w);
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Entry-wise map to a new scalar type.
    pub fn map<U: Scalar>(&self, f: impl Fn(T) -> U) -> Tensor<U> {
        Tensor {
            shape: self.shape.clone(),
            data: self.data.iter().map(|&x| f(x)).collect(),
        }
    }
}

impl Tensor<f64> {
    /// Lift to a complex tensor with zero imaginary part.
    pub fn to_complex(&self) -> ComplexTensor {
        self.map(|x| Complex64::new(x, 0.0))
    }
}

impl ComplexTensor {
    /// Real part as a real tensor.
    pub fn real(&self) -> Tensor<f64> {
        self.map(|x| x.re)
    }

    /// Entry-wise conjugate (an involution).
    pub fn conjugate(&self) -> ComplexTensor {
        self.map(|x| x.conj())
    }

    /// Largest entry-wise |imaginary part|.
    pub fn max_imag_abs(&self) -> f64 {
        self.data.iter().map(|x| x.im.abs()).fold(0.0, f64::max)
    }
}

/// Dense matrix, column-major (an order-2 tensor view).
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T: Scalar = f64> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type ComplexMatrix = Matrix<Complex64>;

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i + i * n] = T::ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut m = Self::zeros(rows, cols);
        for c in 0..cols {
            for r in 0..rows {
                m.data[r + c * rows] = f(r, c);
            }
        }
        m
    }

    /// Build from row slices (convenient for literal 3x3 transforms).
    pub fn from_rows(rows: &[&[T]]) -> Self {
        let r = rows.len();
        let c = if r > 0 { rows[0].len() } else { 0 };
        Self::from_fn(r, c, |i, j| rows[i][j])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [T] {
        &mut self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> T {
        self.data[r + c * self.rows]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: T) {
        self.data[r + c * self.rows] = v;
    }

    /// Column `c` as a contiguous slice.
    #[inline]
    pub fn col(&self, c: usize) -> &[T] {
        &self.data[c * self.rows..(c + 1) * self.rows]
    }

    #[inline]
    pub fn col_mut(&mut self, c: usize) -> &mut [T] {
        &mut self.data[c * self.rows..(c + 1) * self.rows]
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for c in 0..self.cols {
            for r in 0..self.rows {
                out.data[c + r * self.cols] = self.data[r + c * self.rows];
            }
        }
        out
    }

    /// Conjugate transpose (plain transpose for real scalars).
    pub fn conj_transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for c in 0..self.cols {
            for r in 0..self.rows {
                out.data[c + r * self.cols] = self.data[r + c * self.rows].conj();
            }
        }
        out
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "matmul: {}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for j in 0..other.cols {
            let dst = &mut out.data[j * self.rows..(j + 1) * self.rows];
            for k in 0..self.cols {
                let w = other.data[k + j * other.rows];
                if w == T::ZERO {
                    continue;
                }
                let src = &self.data[k * self.rows..(k + 1) * self.rows];
                for (d, &s) in dst.iter_mut().zip(src) {
                    *d += s * w;
                }
            }
        }
        Ok(out)
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `|| M^H M - I ||_F`, the orthonormality residue of the columns.
    pub fn orthonormality_residue(&self) -> f64 {
        let gram = self
            .conj_transpose()
            .matmul(self)
            .expect("gram dimensions always agree");
        let mut acc = 0.0;
        for c in 0..gram.cols {
            for r in 0..gram.rows {
                let expect = if r == c { T::ONE } else { T::ZERO };
                acc += (gram.get(r, c) - expect).norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// Columns orthonormal within `tol` (conjugate-transpose sense).
    pub fn is_orthonormal(&self, tol: f64) -> bool {
        self.orthonormality_residue() < tol
    }

    /// View as an order-2 tensor (same layout, zero reshuffling).
    pub fn to_tensor(&self) -> Tensor<T> {
        Tensor {
            shape: vec![self.rows, self.cols],
            data: self.data.clone(),
        }
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| f(x)).collect(),
        }
    }
}

impl Matrix<f64> {
    pub fn to_complex(&self) -> ComplexMatrix {
        self.map(|x| Complex64::new(x, 0.0))
    }
}
