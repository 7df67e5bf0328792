use num_complex::Complex;

use super::{check_finite_input, check_step_size, AdaptiveFilter, StepOutput};
use crate::error::{check_dim, Error, Result};
use crate::numkernel::{orthogonalize_against, CMatrix, CVector, MomentAccumulator, DEFLATION_TOL};
use crate::scalar::Real;

/// Orthonormal basis of the Krylov subspace `span{p, Rp, …, R^{D−1}p}`.
///
/// Built with an Arnoldi recursion; stops early (returning fewer than `rank`
/// columns) when the subspace stops growing.
pub fn krylov_projection<T: Real>(r: &CMatrix<T>, p: &CVector<T>, rank: usize) -> Result<CMatrix<T>> {
    check_dim("krylov covariance (square)", r.rows(), r.cols())?;
    check_dim("krylov cross-correlation", r.rows(), p.len())?;
    if rank == 0 || rank > p.len() {
        return Err(Error::InvalidParameter {
            name: "rank",
            reason: format!("need 1 <= D <= M, got D = {rank}, M = {}", p.len()),
        });
    }
    let p_norm = p.norm();
    if !(p_norm > T::zero()) {
        return Err(Error::DegenerateBasis);
    }
    let tol = T::lit(DEFLATION_TOL);
    let mut basis = vec![p.scaled_real(T::one() / p_norm)];
    while basis.len() < rank {
        let mut v = r.mul_vec(basis.last().expect("basis is non-empty"))?;
        let original = v.norm();
        let remaining = orthogonalize_against(&mut v, &basis)?;
        if !(remaining > tol * original.max(T::one())) {
            break;
        }
        basis.push(v.scaled_real(T::one() / remaining));
    }
    CMatrix::from_columns(&basis)
}

/// Krylov-subspace reduced-rank baseline.
///
/// The projection is rebuilt from plain running averages of `r rᴴ` and `d* r`
/// every `refresh` steps; the `D`-tap filter on the projected data adapts by
/// LMS. Until the moments are informative the projection is zero, so the
/// output starts at zero like the other filters.
#[derive(Debug, Clone)]
pub struct KrylovLms<T> {
    moments: MomentAccumulator<T>,
    s: CMatrix<T>,
    w_bar: CVector<T>,
    mu: T,
    refresh: usize,
    steps: u64,
}

impl<T: Real> KrylovLms<T> {
    pub fn new(dim: usize, rank: usize, mu: T, refresh: usize) -> Result<Self> {
        if rank == 0 || rank > dim {
            return Err(Error::InvalidParameter {
                name: "rank",
                reason: format!("need 1 <= D <= M, got D = {rank}, M = {dim}"),
            });
        }
        if refresh == 0 {
            return Err(Error::InvalidParameter {
                name: "refresh",
                reason: "refresh interval must be at least 1".into(),
            });
        }
        check_step_size("mu", mu, false)?;
        Ok(Self {
            moments: MomentAccumulator::new(dim),
            s: CMatrix::zeros(dim, rank),
            w_bar: CVector::zeros(rank),
            mu,
            refresh,
            steps: 0,
        })
    }

    pub fn projection(&self) -> &CMatrix<T> {
        &self.s
    }

    pub fn weights(&self) -> &CVector<T> {
        &self.w_bar
    }

    pub fn rank(&self) -> usize {
        self.s.cols()
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    fn rebuild_projection(&mut self) -> Result<()> {
        let m = self.moments.finish()?;
        match krylov_projection(&m.r, &m.p, self.rank()) {
            Ok(q) => {
                let mut s = CMatrix::zeros(self.s.rows(), self.s.cols());
                for j in 0..q.cols() {
                    s.set_column(j, &q.column(j))?;
                }
                self.s = s;
                Ok(())
            }
            // p̂ = 0: keep the previous projection.
            Err(Error::DegenerateBasis) => Ok(()),
            Err(e) => Err(e),
        }
    }
}

impl<T: Real> AdaptiveFilter<T> for KrylovLms<T> {
    fn dim(&self) -> usize {
        self.s.rows()
    }

    fn output(&self, r: &CVector<T>) -> Result<Complex<T>> {
        check_dim("observation length", self.s.rows(), r.len())?;
        self.w_bar.dot(&self.s.adjoint_mul_vec(r)?)
    }

    fn step_with(
        &mut self,
        r: &CVector<T>,
        desired: &mut dyn FnMut(Complex<T>) -> Complex<T>,
    ) -> Result<StepOutput<T>> {
        check_dim("observation length", self.s.rows(), r.len())?;
        let r_bar = self.s.adjoint_mul_vec(r)?;
        let x = self.w_bar.dot(&r_bar)?;
        let d = desired(x);
        check_finite_input(r, d)?;
        let e = d - x;
        let ec = e.conj();
        for k in 0..self.w_bar.len() {
            let g = -(ec * r_bar[k]);
            self.w_bar[k] = self.w_bar[k] - g * self.mu;
        }
        self.moments.push(r, d)?;
        let step = self.steps;
        self.steps += 1;
        if self.steps % self.refresh as u64 == 0 {
            self.rebuild_projection()?;
        }
        if !self.w_bar.is_finite() || !self.s.is_finite() {
            return Err(Error::Divergence { step });
        }
        Ok(StepOutput { x, e })
    }
}
