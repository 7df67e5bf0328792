use num_complex::Complex;

use super::{CMatrix, CVector};
use crate::error::{check_dim, Error, Result};
use crate::scalar::Real;

/// Second-order statistics of an observation/desired-signal pair.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentSet<T> {
    /// Covariance `E[r rᴴ]`.
    pub r: CMatrix<T>,
    /// Cross-correlation `E[d* r]`.
    pub p: CVector<T>,
    /// `E[|d|²]`.
    pub sigma_d_sq: T,
    /// Number of samples averaged; zero for analytically supplied moments.
    pub sample_count: usize,
}

impl<T: Real> MomentSet<T> {
    /// Wraps analytically known moments, checking shapes and Hermitian symmetry.
    pub fn from_parts(r: CMatrix<T>, p: CVector<T>, sigma_d_sq: T) -> Result<Self> {
        check_dim("moment set (square R)", r.rows(), r.cols())?;
        check_dim("moment set (p)", r.rows(), p.len())?;
        let deviation = r.hermitian_deviation();
        if !(deviation <= T::lit(super::HERMITIAN_TOL)) {
            return Err(Error::NotHermitian {
                deviation: deviation.as_f64(),
            });
        }
        if !(sigma_d_sq >= T::zero()) {
            return Err(Error::InvalidParameter {
                name: "sigma_d_sq",
                reason: format!("must be nonnegative, got {sigma_d_sq}"),
            });
        }
        Ok(Self {
            r,
            p,
            sigma_d_sq,
            sample_count: 0,
        })
    }

    pub fn dim(&self) -> usize {
        self.p.len()
    }
}

/// Running sums for plain (unweighted) sample moments.
///
/// Only the upper triangle of `Σ r rᴴ` is accumulated; the lower triangle is
/// mirrored on [`finish`](Self::finish) so the estimate is exactly Hermitian.
#[derive(Debug, Clone)]
pub struct MomentAccumulator<T> {
    dim: usize,
    sum_rr: Vec<Complex<T>>,
    sum_dr: Vec<Complex<T>>,
    sum_dd: T,
    count: usize,
}

impl<T: Real> MomentAccumulator<T> {
    pub fn new(dim: usize) -> Self {
        let zero = Complex::new(T::zero(), T::zero());
        Self {
            dim,
            sum_rr: vec![zero; dim * dim],
            sum_dr: vec![zero; dim],
            sum_dd: T::zero(),
            count: 0,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn push(&mut self, r: &CVector<T>, d: Complex<T>) -> Result<()> {
        check_dim("moment sample", self.dim, r.len())?;
        let n = self.dim;
        for i in 0..n {
            let ri = r[i];
            for j in i..n {
                self.sum_rr[i * n + j] += ri * r[j].conj();
            }
            self.sum_dr[i] += d.conj() * ri;
        }
        self.sum_dd += d.norm_sqr();
        self.count += 1;
        Ok(())
    }

    pub fn finish(&self) -> Result<MomentSet<T>> {
        if self.count == 0 {
            return Err(Error::NoSamples);
        }
        let n = self.dim;
        let inv = T::one() / T::from_usize(self.count).expect("sample count representable");
        let mut r = CMatrix::zeros(n, n);
        for i in 0..n {
            r[(i, i)] = Complex::new(self.sum_rr[i * n + i].re * inv, T::zero());
            for j in i + 1..n {
                let v = self.sum_rr[i * n + j] * inv;
                r[(i, j)] = v;
                r[(j, i)] = v.conj();
            }
        }
        let p = CVector::from_fn(n, |i| self.sum_dr[i] * inv);
        Ok(MomentSet {
            r,
            p,
            sigma_d_sq: self.sum_dd * inv,
            sample_count: self.count,
        })
    }
}

/// Sample moments `R = (1/T)Σ r rᴴ`, `p = (1/T)Σ d* r`, `σ_d² = (1/T)Σ |d|²`.
pub fn estimate_moments<'a, T, I>(samples: I) -> Result<MomentSet<T>>
where
    T: Real,
    I: IntoIterator<Item = (&'a CVector<T>, Complex<T>)>,
{
    let mut iter = samples.into_iter();
    let (r0, d0) = iter.next().ok_or(Error::NoSamples)?;
    let mut acc = MomentAccumulator::new(r0.len());
    acc.push(r0, d0)?;
    for (r, d) in iter {
        acc.push(r, d)?;
    }
    acc.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one() -> Complex<f64> {
        Complex::new(1.0, 0.0)
    }

    #[test]
    fn single_sample() {
        let e1 = CVector::<f64>::basis(3, 0);
        let m = estimate_moments([(&e1, one())]).unwrap();
        assert_eq!(m.r, CMatrix::outer(&e1, &e1));
        assert_eq!(m.p, e1);
        assert_eq!(m.sigma_d_sq, 1.0);
        assert_eq!(m.sample_count, 1);
    }

    #[test]
    fn two_sample_average() {
        let e1 = CVector::<f64>::basis(3, 0);
        let e2 = CVector::<f64>::basis(3, 1);
        let m = estimate_moments([(&e1, one()), (&e2, -one())]).unwrap();
        let mut expected = CMatrix::zeros(3, 3);
        expected[(0, 0)] = Complex::new(0.5, 0.0);
        expected[(1, 1)] = Complex::new(0.5, 0.0);
        assert_eq!(m.r, expected);
        assert_eq!(m.p, CVector::from_real(&[0.5, -0.5, 0.0]));
    }

    #[test]
    fn empty_sequence_is_an_error() {
        let empty: Vec<(&CVector<f64>, Complex<f64>)> = vec![];
        assert_eq!(estimate_moments(empty), Err(Error::NoSamples));
    }

    #[test]
    fn ragged_samples_rejected() {
        let a = CVector::<f64>::zeros(2);
        let b = CVector::<f64>::zeros(3);
        assert!(estimate_moments([(&a, one()), (&b, one())]).is_err());
    }
}
