use num_complex::Complex;

use super::{CMatrix, CVector};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// A column is dropped when its norm after deflation falls below this
/// fraction of `max(1, original norm)`.
pub const DEFLATION_TOL: f64 = 1e-10;

/// Removes from `v` its components along the orthonormal `basis`, using two
/// classical Gram-Schmidt passes. Returns the remaining norm.
pub fn orthogonalize_against<T: Real>(v: &mut CVector<T>, basis: &[CVector<T>]) -> Result<T> {
    for _ in 0..2 {
        for q in basis {
            let coeff = q.dot(v)?;
            v.axpy(-coeff, q)?;
        }
    }
    Ok(v.norm())
}

/// Orthonormal basis for the column span of `b` (Gram-Schmidt with
/// reorthogonalization). Columns that deflate to (numerically) zero are
/// dropped, so the result may have fewer columns than `b`.
pub fn orthonormalize_columns<T: Real>(b: &CMatrix<T>) -> Result<CMatrix<T>> {
    if !b.is_finite() {
        return Err(Error::NonFinite("orthonormalize_columns"));
    }
    let tol = T::lit(DEFLATION_TOL);
    let mut basis: Vec<CVector<T>> = Vec::with_capacity(b.cols());
    for j in 0..b.cols() {
        let mut v = b.column(j);
        let original = v.norm();
        if original.is_zero() {
            continue;
        }
        let remaining = orthogonalize_against(&mut v, &basis)?;
        if remaining <= tol * original.max(T::one()) {
            continue;
        }
        basis.push(v.scaled(Complex::new(T::one() / remaining, T::zero())));
    }
    if basis.is_empty() {
        return Err(Error::DegenerateBasis);
    }
    CMatrix::from_columns(&basis)
}
