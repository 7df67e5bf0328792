use num_complex::Complex;

use super::{check_finite_input, check_step_size, AdaptiveFilter, StepOutput};
use crate::error::{check_dim, Error, Result};
use crate::numkernel::CVector;
use crate::scalar::Real;

/// Full-rank complex LMS: `x = wᴴ r`, `e = d − x`, `w ← w + μ e* r`.
#[derive(Debug, Clone, PartialEq)]
pub struct FullRankState<T> {
    w: CVector<T>,
    mu: T,
    steps: u64,
}

impl<T: Real> FullRankState<T> {
    /// Zero-initialized filter of length `dim`.
    pub fn new(dim: usize, mu: T) -> Result<Self> {
        Self::from_weights(CVector::zeros(dim), mu)
    }

    pub fn from_weights(w: CVector<T>, mu: T) -> Result<Self> {
        check_step_size("mu", mu, false)?;
        if !w.is_finite() {
            return Err(Error::NonFinite("initial weights"));
        }
        Ok(Self { w, mu, steps: 0 })
    }

    pub fn weights(&self) -> &CVector<T> {
        &self.w
    }

    pub fn mu(&self) -> T {
        self.mu
    }

    pub fn dim(&self) -> usize {
        self.w.len()
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn output(&self, r: &CVector<T>) -> Result<Complex<T>> {
        check_dim("observation length", self.dim(), r.len())?;
        self.w.dot(r)
    }

    pub fn step(&mut self, r: &CVector<T>, d: Complex<T>) -> Result<StepOutput<T>> {
        self.step_with(r, &mut |_| d)
    }
}

impl<T: Real> AdaptiveFilter<T> for FullRankState<T> {
    fn dim(&self) -> usize {
        self.w.len()
    }

    fn output(&self, r: &CVector<T>) -> Result<Complex<T>> {
        FullRankState::output(self, r)
    }

    fn step_with(
        &mut self,
        r: &CVector<T>,
        desired: &mut dyn FnMut(Complex<T>) -> Complex<T>,
    ) -> Result<StepOutput<T>> {
        let x = FullRankState::output(self, r)?;
        let d = desired(x);
        check_finite_input(r, d)?;
        let e = d - x;
        let ec = e.conj();
        // Same expression as the reduced-rank update so that the two agree
        // bit for bit when the projection is the identity.
        for m in 0..self.w.len() {
            let g = -(ec * r[m]);
            self.w[m] = self.w[m] - g * self.mu;
        }
        let step = self.steps;
        self.steps += 1;
        if !self.w.is_finite() {
            return Err(Error::Divergence { step });
        }
        Ok(StepOutput { x, e })
    }
}

/// One full-rank LMS step, returning the output/error pair and the new state.
pub fn fullrank_lms_step<T: Real>(
    state: &FullRankState<T>,
    r: &CVector<T>,
    d: Complex<T>,
) -> Result<(StepOutput<T>, FullRankState<T>)> {
    let mut next = state.clone();
    let out = next.step(r, d)?;
    Ok((out, next))
}
