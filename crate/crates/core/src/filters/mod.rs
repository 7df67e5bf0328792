//! Online adaptive estimators.
//!
//! - [`FullRankState`]: standard complex LMS on the full observation.
//! - [`JioState`]: a projection matrix `S` (a bank of `D` full-rank filters)
//!   followed by a `D`-tap reduced-rank filter `w̄`, both adapted by coupled
//!   LMS recursions driven by the same error.
//! - [`KrylovLms`]: projection onto a Krylov subspace of running moment
//!   estimates, with an LMS-adapted reduced-rank filter.
//!
//! Steps are available both as pure functions returning the new state and as
//! in-place methods; both perform identical arithmetic.

mod detect;
mod fullrank;
mod jio;
mod krylov;

use num_complex::Complex;

pub use detect::detect_bpsk;
pub use fullrank::{fullrank_lms_step, FullRankState};
pub use jio::{gradient_s, gradient_w, jio_lms_step, jio_output, JioState};
pub use krylov::{krylov_projection, KrylovLms};

use crate::error::{Error, Result};
use crate::numkernel::CVector;
use crate::scalar::Real;

/// Filter output `x(i)` and error `e(i) = d(i) − x(i)` of one adaptation step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepOutput<T> {
    pub x: Complex<T>,
    pub e: Complex<T>,
}

/// Common interface of the online estimators.
pub trait AdaptiveFilter<T: Real> {
    /// Observation dimension `M`.
    fn dim(&self) -> usize;

    /// Filter output for `r` without adapting.
    fn output(&self, r: &CVector<T>) -> Result<Complex<T>>;

    /// One adaptation step where the desired sample is chosen after the
    /// output is known (training or decision-directed operation).
    fn step_with(
        &mut self,
        r: &CVector<T>,
        desired: &mut dyn FnMut(Complex<T>) -> Complex<T>,
    ) -> Result<StepOutput<T>>;

    fn step_known(&mut self, r: &CVector<T>, d: Complex<T>) -> Result<StepOutput<T>> {
        self.step_with(r, &mut |_| d)
    }
}

pub(crate) fn check_finite_input<T: Real>(r: &CVector<T>, d: Complex<T>) -> Result<()> {
    if !r.is_finite() {
        return Err(Error::NonFinite("observation vector"));
    }
    if !(d.re.is_finite() && d.im.is_finite()) {
        return Err(Error::NonFinite("desired sample"));
    }
    Ok(())
}

pub(crate) fn check_step_size<T: Real>(name: &'static str, v: T, allow_zero: bool) -> Result<()> {
    let ok = v.is_finite() && (v > T::zero() || (allow_zero && v.is_zero()));
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            reason: format!(
                "step size must be {} and finite, got {v}",
                if allow_zero { "nonnegative" } else { "positive" }
            ),
        })
    }
}
