use std::ops::{Index, IndexMut};

use num_complex::Complex;

use crate::error::{check_dim, Result};
use crate::scalar::Real;

/// Fixed-length complex column vector.
#[derive(Debug, Clone, PartialEq)]
pub struct CVector<T> {
    data: Vec<Complex<T>>,
}

impl<T: Real> CVector<T> {
    pub fn new(data: Vec<Complex<T>>) -> Self {
        Self { data }
    }

    pub fn zeros(len: usize) -> Self {
        Self {
            data: vec![Complex::new(T::zero(), T::zero()); len],
        }
    }

    /// Canonical basis vector `e_index` of length `len`.
    pub fn basis(len: usize, index: usize) -> Self {
        let mut v = Self::zeros(len);
        v.data[index] = Complex::new(T::one(), T::zero());
        v
    }

    pub fn from_real(values: &[T]) -> Self {
        Self {
            data: values.iter().map(|&v| Complex::new(v, T::zero())).collect(),
        }
    }

    pub fn from_fn(len: usize, f: impl FnMut(usize) -> Complex<T>) -> Self {
        Self {
            data: (0..len).map(f).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    /// Mutable view of the elements. The length cannot change through it.
    pub fn as_mut_slice(&mut self) -> &mut [Complex<T>] {
        &mut self.data
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Complex<T>> {
        self.data.iter()
    }

    pub fn into_vec(self) -> Vec<Complex<T>> {
        self.data
    }

    /// Hermitian inner product `selfᴴ · other`.
    pub fn dot(&self, other: &Self) -> Result<Complex<T>> {
        check_dim("dot", self.len(), other.len())?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| {
                acc + a.conj() * b
            }))
    }

    pub fn norm_sqr(&self) -> T {
        self.data
            .iter()
            .fold(T::zero(), |acc, z| acc + z.norm_sqr())
    }

    pub fn norm(&self) -> T {
        self.norm_sqr().sqrt()
    }

    pub fn scaled(&self, c: Complex<T>) -> Self {
        Self {
            data: self.data.iter().map(|z| z * c).collect(),
        }
    }

    pub fn scaled_real(&self, c: T) -> Self {
        Self {
            data: self.data.iter().map(|z| z * c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_dim("vector add", self.len(), other.len())?;
        Ok(Self {
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        check_dim("vector sub", self.len(), other.len())?;
        Ok(Self {
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    /// `self += alpha · x`
    pub fn axpy(&mut self, alpha: Complex<T>, x: &Self) -> Result<()> {
        check_dim("axpy", self.len(), x.len())?;
        for (y, xi) in self.data.iter_mut().zip(&x.data) {
            *y += alpha * xi;
        }
        Ok(())
    }

    pub fn conj(&self) -> Self {
        Self {
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|z| z.re.is_zero() && z.im.is_zero())
    }

    /// Largest elementwise modulus of `self − other`; infinite on length mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        if self.len() != other.len() {
            return T::infinity();
        }
        self.data
            .iter()
            .zip(&other.data)
            .fold(T::zero(), |acc, (a, b)| acc.max((a - b).norm()))
    }
}

impl<T> Index<usize> for CVector<T> {
    type Output = Complex<T>;

    fn index(&self, i: usize) -> &Complex<T> {
        &self.data[i]
    }
}

impl<T> IndexMut<usize> for CVector<T> {
    fn index_mut(&mut self, i: usize) -> &mut Complex<T> {
        &mut self.data[i]
    }
}

impl<T> From<Vec<Complex<T>>> for CVector<T> {
    fn from(data: Vec<Complex<T>>) -> Self {
        Self { data }
    }
}

impl<'a, T> IntoIterator for &'a CVector<T> {
    type Item = &'a Complex<T>;
    type IntoIter = std::slice::Iter<'a, Complex<T>>;

    fn into_iter(self) -> Self::IntoIter {
        self.data.iter()
    }
}
