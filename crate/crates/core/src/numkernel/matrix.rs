use std::ops::{Index, IndexMut};

use num_complex::Complex;

use super::CVector;
use crate::error::{check_dim, Error, Result};
use crate::scalar::Real;

/// Dense row-major complex matrix with fixed dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

fn czero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

impl<T: Real> CMatrix<T> {
    /// Builds a matrix from row-major entries.
    pub fn new(rows: usize, cols: usize, data: Vec<Complex<T>>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidParameter {
                name: "shape",
                reason: format!("matrix dimensions must be positive, got {rows}x{cols}"),
            });
        }
        check_dim("matrix entries", rows * cols, data.len())?;
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![czero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::identity_columns(n, n)
    }

    /// The first `cols` columns of the `rows × rows` identity.
    pub fn identity_columns(rows: usize, cols: usize) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows.min(cols) {
            m[(i, i)] = Complex::new(T::one(), T::zero());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_columns(columns: &[CVector<T>]) -> Result<Self> {
        let first = columns.first().ok_or(Error::DegenerateBasis)?;
        let rows = first.len();
        for c in columns {
            check_dim("from_columns", rows, c.len())?;
        }
        Ok(Self::from_fn(rows, columns.len(), |i, j| columns[j][i]))
    }

    pub fn diagonal(values: &[Complex<T>]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n, n);
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = *v;
        }
        m
    }

    /// Outer product `a · bᴴ`.
    pub fn outer(a: &CVector<T>, b: &CVector<T>) -> Self {
        Self::from_fn(a.len(), b.len(), |i, j| a[i] * b[j].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex<T>] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> CVector<T> {
        CVector::from_fn(self.rows, |i| self[(i, j)])
    }

    pub fn columns(&self) -> Vec<CVector<T>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn set_column(&mut self, j: usize, v: &CVector<T>) -> Result<()> {
        check_dim("set_column", self.rows, v.len())?;
        for i in 0..self.rows {
            self[(i, j)] = v[i];
        }
        Ok(())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    /// `self · v`
    pub fn mul_vec(&self, v: &CVector<T>) -> Result<CVector<T>> {
        check_dim("matrix-vector product", self.cols, v.len())?;
        Ok(CVector::from_fn(self.rows, |i| {
            self.row(i)
                .iter()
                .zip(v.iter())
                .fold(czero(), |acc, (a, b)| acc + a * b)
        }))
    }

    /// `selfᴴ · v`, evaluated as one Hermitian inner product per column.
    pub fn adjoint_mul_vec(&self, v: &CVector<T>) -> Result<CVector<T>> {
        check_dim("adjoint matrix-vector product", self.rows, v.len())?;
        let mut out = vec![czero::<T>(); self.cols];
        for (j, o) in out.iter_mut().enumerate() {
            let mut acc = czero();
            for i in 0..self.rows {
                acc += self[(i, j)].conj() * v[i];
            }
            *o = acc;
        }
        Ok(CVector::new(out))
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        check_dim("matrix product", self.cols, other.rows)?;
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.re.is_zero() && a.im.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    /// `selfᴴ · other`
    pub fn adjoint_matmul(&self, other: &Self) -> Result<Self> {
        self.adjoint().matmul(other)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, "matrix add", |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, "matrix sub", |a, b| a - b)
    }

    fn zip_with(
        &self,
        other: &Self,
        context: &'static str,
        f: impl Fn(Complex<T>, Complex<T>) -> Complex<T>,
    ) -> Result<Self> {
        check_dim(context, self.rows, other.rows)?;
        check_dim(context, self.cols, other.cols)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(*a, *b)).collect(),
        })
    }

    pub fn scaled(&self, c: Complex<T>) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * c).collect(),
        }
    }

    /// Largest `|a_ij − conj(a_ji)|`; infinite for non-square matrices.
    pub fn hermitian_deviation(&self) -> T {
        if !self.is_square() {
            return T::infinity();
        }
        let mut dev = T::zero();
        for i in 0..self.rows {
            for j in i..self.cols {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    /// `(A + Aᴴ)/2`, exactly Hermitian.
    pub fn hermitian_part(&self) -> Result<Self> {
        check_dim("hermitian_part", self.rows, self.cols)?;
        let half = T::lit(0.5);
        let mut out = self.clone();
        for i in 0..self.rows {
            out[(i, i)] = Complex::new(self[(i, i)].re, T::zero());
            for j in i + 1..self.cols {
                let v = (self[(i, j)] + self[(j, i)].conj()) * half;
                out[(i, j)] = v;
                out[(j, i)] = v.conj();
            }
        }
        Ok(out)
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt()
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        if self.rows != other.rows || self.cols != other.cols {
            return T::infinity();
        }
        self.data
            .iter()
            .zip(&other.data)
            .fold(T::zero(), |acc, (a, b)| acc.max((a - b).norm()))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl<T> Index<(usize, usize)> for CMatrix<T> {
    type Output = Complex<T>;

    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for CMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}
