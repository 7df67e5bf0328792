use num_complex::Complex;

use super::{CMatrix, CVector};
use crate::error::{check_dim, Error, Result};
use crate::scalar::Real;

/// Smallest admissible Cholesky pivot. Below it the solve fails; callers
/// that want diagonal loading must add it themselves.
pub const PIVOT_FLOOR: f64 = 1e-12;

/// Elementwise tolerance for accepting a matrix as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Cholesky factorization `A = L Lᴴ` of a Hermitian positive-definite matrix.
#[derive(Debug, Clone)]
pub struct Cholesky<T> {
    lower: CMatrix<T>,
}

impl<T: Real> Cholesky<T> {
    pub fn factor(a: &CMatrix<T>) -> Result<Self> {
        check_dim("hermitian solve (square)", a.rows(), a.cols())?;
        let deviation = a.hermitian_deviation();
        if !(deviation <= T::lit(HERMITIAN_TOL)) {
            return Err(Error::NotHermitian {
                deviation: deviation.as_f64(),
            });
        }
        let n = a.rows();
        let floor = T::lit(PIVOT_FLOOR);
        let mut l = CMatrix::zeros(n, n);
        for j in 0..n {
            let mut pivot = a[(j, j)].re;
            for k in 0..j {
                pivot -= l[(j, k)].norm_sqr();
            }
            if !(pivot >= floor) {
                return Err(Error::IllConditioned {
                    pivot: pivot.abs().as_f64(),
                });
            }
            let ljj = pivot.sqrt();
            l[(j, j)] = Complex::new(ljj, T::zero());
            for i in j + 1..n {
                let mut acc = a[(i, j)];
                for k in 0..j {
                    acc -= l[(i, k)] * l[(j, k)].conj();
                }
                l[(i, j)] = acc / ljj;
            }
        }
        Ok(Self { lower: l })
    }

    pub fn dim(&self) -> usize {
        self.lower.rows()
    }

    /// Solves `L Lᴴ x = b` by forward then backward substitution.
    pub fn solve(&self, b: &CVector<T>) -> Result<CVector<T>> {
        let n = self.dim();
        check_dim("hermitian solve (rhs)", n, b.len())?;
        let l = &self.lower;
        let mut y = b.clone();
        for i in 0..n {
            let mut acc = y[i];
            for k in 0..i {
                acc -= l[(i, k)] * y[k];
            }
            y[i] = acc / l[(i, i)].re;
        }
        for i in (0..n).rev() {
            let mut acc = y[i];
            for k in i + 1..n {
                acc -= l[(k, i)].conj() * y[k];
            }
            y[i] = acc / l[(i, i)].re;
        }
        Ok(y)
    }
}

/// Solves `A x = b` for Hermitian positive-definite `A`.
///
/// One step of iterative refinement is applied after the Cholesky solve.
pub fn hermitian_solve<T: Real>(a: &CMatrix<T>, b: &CVector<T>) -> Result<CVector<T>> {
    check_dim("hermitian solve (rhs)", a.rows(), b.len())?;
    let chol = Cholesky::factor(a)?;
    let mut x = chol.solve(b)?;
    let residual = b.sub(&a.mul_vec(&x)?)?;
    let correction = chol.solve(&residual)?;
    x.axpy(Complex::new(T::one(), T::zero()), &correction)?;
    if !x.is_finite() {
        return Err(Error::NonFinite("hermitian solve"));
    }
    Ok(x)
}
