use num_complex::Complex;

use super::{check_finite_input, check_step_size, AdaptiveFilter, StepOutput};
use crate::error::{check_dim, Error, Result};
use crate::numkernel::{CMatrix, CVector};
use crate::scalar::Real;

/// Jointly adapted projection matrix and reduced-rank filter.
///
/// The output is `x = w̄ᴴ Sᴴ r`. Each step computes the error against the
/// pre-update state and then moves both `w̄` and `S` along their instantaneous
/// conjugate gradients:
///
/// ```text
/// r̄  = Sᴴ r,   x = w̄ᴴ r̄,   e = d − x
/// w̄ ← w̄ + μ e* r̄
/// S  ← S + η e* r w̄ᴴ      (old w̄)
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct JioState<T> {
    s: CMatrix<T>,
    w_bar: CVector<T>,
    mu: T,
    eta: T,
    steps: u64,
}

impl<T: Real> JioState<T> {
    /// Default start: `S` is the first `rank` columns of the identity and
    /// `w̄ = 0`.
    pub fn new(dim: usize, rank: usize, mu: T, eta: T) -> Result<Self> {
        if rank == 0 || rank > dim {
            return Err(Error::InvalidParameter {
                name: "rank",
                reason: format!("need 1 <= D <= M, got D = {rank}, M = {dim}"),
            });
        }
        Self::from_parts(CMatrix::identity_columns(dim, rank), CVector::zeros(rank), mu, eta)
    }

    pub fn from_parts(s: CMatrix<T>, w_bar: CVector<T>, mu: T, eta: T) -> Result<Self> {
        check_dim("reduced-rank filter length", s.cols(), w_bar.len())?;
        if s.cols() > s.rows() {
            return Err(Error::InvalidParameter {
                name: "rank",
                reason: format!("need D <= M, got D = {}, M = {}", s.cols(), s.rows()),
            });
        }
        check_step_size("mu", mu, false)?;
        check_step_size("eta", eta, true)?;
        if !s.is_finite() || !w_bar.is_finite() {
            return Err(Error::NonFinite("initial filter state"));
        }
        Ok(Self {
            s,
            w_bar,
            mu,
            eta,
            steps: 0,
        })
    }

    pub fn projection(&self) -> &CMatrix<T> {
        &self.s
    }

    pub fn weights(&self) -> &CVector<T> {
        &self.w_bar
    }

    pub fn mu(&self) -> T {
        self.mu
    }

    pub fn eta(&self) -> T {
        self.eta
    }

    /// Observation dimension `M`.
    pub fn dim(&self) -> usize {
        self.s.rows()
    }

    /// Reduced rank `D`.
    pub fn rank(&self) -> usize {
        self.s.cols()
    }

    /// Number of completed adaptation steps.
    pub fn steps(&self) -> u64 {
        self.steps
    }

    /// Composite full-rank filter `S w̄`.
    pub fn composite(&self) -> CVector<T> {
        self.s.mul_vec(&self.w_bar).expect("state shapes are consistent")
    }

    /// Projected observation `r̄ = Sᴴ r`.
    pub fn reduce(&self, r: &CVector<T>) -> Result<CVector<T>> {
        check_dim("observation length", self.dim(), r.len())?;
        self.s.adjoint_mul_vec(r)
    }

    pub fn output(&self, r: &CVector<T>) -> Result<Complex<T>> {
        let r_bar = self.reduce(r)?;
        self.w_bar.dot(&r_bar)
    }

    /// `∂J/∂w̄* = −e* r̄`
    pub fn gradient_w(&self, r: &CVector<T>, d: Complex<T>) -> Result<CVector<T>> {
        let r_bar = self.reduce(r)?;
        let e = d - self.w_bar.dot(&r_bar)?;
        Ok(grad_w(e, &r_bar))
    }

    /// `∂J/∂S* = −e* r w̄ᴴ`
    pub fn gradient_s(&self, r: &CVector<T>, d: Complex<T>) -> Result<CMatrix<T>> {
        let r_bar = self.reduce(r)?;
        let e = d - self.w_bar.dot(&r_bar)?;
        Ok(CMatrix::from_fn(self.dim(), self.rank(), |m, k| {
            grad_s_entry(e, r[m], self.w_bar[k])
        }))
    }

    /// In-place adaptation step. On a divergence error the state has already
    /// absorbed the non-finite update and should be discarded.
    pub fn step(&mut self, r: &CVector<T>, d: Complex<T>) -> Result<StepOutput<T>> {
        self.step_with(r, &mut |_| d)
    }

    fn step_inner(
        &mut self,
        r: &CVector<T>,
        desired: &mut dyn FnMut(Complex<T>) -> Complex<T>,
    ) -> Result<StepOutput<T>> {
        let r_bar = self.reduce(r)?;
        let x = self.w_bar.dot(&r_bar)?;
        let d = desired(x);
        check_finite_input(r, d)?;
        let e = d - x;
        let (rows, cols) = (self.dim(), self.rank());
        if !self.eta.is_zero() {
            for m in 0..rows {
                for k in 0..cols {
                    let g = grad_s_entry(e, r[m], self.w_bar[k]);
                    self.s[(m, k)] = self.s[(m, k)] - g * self.eta;
                }
            }
        }
        let g = grad_w(e, &r_bar);
        for k in 0..cols {
            self.w_bar[k] = self.w_bar[k] - g[k] * self.mu;
        }
        let step = self.steps;
        self.steps += 1;
        if !self.w_bar.is_finite() || !self.s.is_finite() {
            return Err(Error::Divergence { step });
        }
        Ok(StepOutput { x, e })
    }
}

fn grad_w<T: Real>(e: Complex<T>, r_bar: &CVector<T>) -> CVector<T> {
    let ec = e.conj();
    CVector::from_fn(r_bar.len(), |k| -(ec * r_bar[k]))
}

fn grad_s_entry<T: Real>(e: Complex<T>, r_m: Complex<T>, w_k: Complex<T>) -> Complex<T> {
    -(e.conj() * r_m * w_k.conj())
}

impl<T: Real> AdaptiveFilter<T> for JioState<T> {
    fn dim(&self) -> usize {
        JioState::dim(self)
    }

    fn output(&self, r: &CVector<T>) -> Result<Complex<T>> {
        JioState::output(self, r)
    }

    fn step_with(
        &mut self,
        r: &CVector<T>,
        desired: &mut dyn FnMut(Complex<T>) -> Complex<T>,
    ) -> Result<StepOutput<T>> {
        self.step_inner(r, desired)
    }
}

/// Reduced-rank output `x = w̄ᴴ Sᴴ r`.
pub fn jio_output<T: Real>(state: &JioState<T>, r: &CVector<T>) -> Result<Complex<T>> {
    state.output(r)
}

/// One joint LMS step, returning the output/error pair and the updated state.
pub fn jio_lms_step<T: Real>(
    state: &JioState<T>,
    r: &CVector<T>,
    d: Complex<T>,
) -> Result<(StepOutput<T>, JioState<T>)> {
    let mut next = state.clone();
    let out = next.step(r, d)?;
    Ok((out, next))
}

pub fn gradient_w<T: Real>(state: &JioState<T>, r: &CVector<T>, d: Complex<T>) -> Result<CVector<T>> {
    state.gradient_w(r, d)
}

pub fn gradient_s<T: Real>(state: &JioState<T>, r: &CVector<T>, d: Complex<T>) -> Result<CMatrix<T>> {
    state.gradient_s(r, d)
}
