//! Batch MMSE designs from known second-order statistics.
//!
//! For a projection `S` (M×D) and reduced-rank filter `w̄` (D) the MSE is
//!
//! ```text
//! J(S, w̄) = σ_d² − 2 Re(w̄ᴴ Sᴴ p) + w̄ᴴ Sᴴ R S w̄
//! ```
//!
//! With `S` fixed the optimal filter is `w̄ = (Sᴴ R S)⁻¹ Sᴴ p`. With `w̄` fixed,
//! `R S (w̄ w̄ᴴ) = p w̄ᴴ` characterizes the optimal projection; because `w̄ w̄ᴴ`
//! has rank one, only the component of `S` along `w̄` is determined and the
//! minimum-norm choice is `S = R⁻¹ p w̄ᴴ / ‖w̄‖²`. [`joint_fixed_point`]
//! alternates the two designs, keeping the undetermined part of `S`.

use num_complex::Complex;

use crate::error::{check_dim, Error, Result};
use crate::numkernel::{hermitian_solve, CMatrix, CVector, MomentSet};
use crate::scalar::Real;

/// Projected statistics `R̄ = Sᴴ R S`, `p̄ = Sᴴ p` for one projection.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedMoments<T> {
    pub r_bar: CMatrix<T>,
    pub p_bar: CVector<T>,
}

impl<T: Real> ReducedMoments<T> {
    pub fn project(s: &CMatrix<T>, m: &MomentSet<T>) -> Result<Self> {
        check_dim("projection rows", m.dim(), s.rows())?;
        let r_bar = s.adjoint_matmul(&m.r.matmul(s)?)?.hermitian_part()?;
        let p_bar = s.adjoint_mul_vec(&m.p)?;
        Ok(Self { r_bar, p_bar })
    }
}

/// Outcome of the alternating design.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDesign<T> {
    pub s: CMatrix<T>,
    pub w_bar: CVector<T>,
    /// MSE after each reduced-filter update.
    pub mse_trajectory: Vec<T>,
    /// `true` when the MSE change fell below the tolerance before the
    /// iteration cap.
    pub converged: bool,
}

impl<T: Real> JointDesign<T> {
    pub fn final_mse(&self) -> T {
        *self.mse_trajectory.last().expect("trajectory is never empty")
    }
}

/// Stopping rule for [`joint_fixed_point`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPointOptions<T> {
    pub tol: T,
    pub max_iters: usize,
}

impl<T: Real> Default for FixedPointOptions<T> {
    fn default() -> Self {
        Self {
            tol: T::lit(1e-9),
            max_iters: 200,
        }
    }
}

/// Wiener solution `w = R⁻¹ p` and its MMSE `σ_d² − pᴴ R⁻¹ p`.
pub fn fullrank_mmse<T: Real>(m: &MomentSet<T>) -> Result<(CVector<T>, T)> {
    let w = hermitian_solve(&m.r, &m.p)?;
    let j = m.sigma_d_sq - m.p.dot(&w)?.re;
    Ok((w, j))
}

/// Optimal reduced-rank filter for a fixed projection.
pub fn reduced_w_mmse<T: Real>(s: &CMatrix<T>, m: &MomentSet<T>) -> Result<CVector<T>> {
    let red = ReducedMoments::project(s, m)?;
    hermitian_solve(&red.r_bar, &red.p_bar)
}

/// Minimum-norm optimal projection for a fixed reduced-rank filter:
/// `S = R⁻¹ (p w̄ᴴ)(w̄ w̄ᴴ)⁺ = R⁻¹ p w̄ᴴ / ‖w̄‖²`.
pub fn projection_mmse<T: Real>(m: &MomentSet<T>, w_bar: &CVector<T>) -> Result<CMatrix<T>> {
    let energy = w_bar.norm_sqr();
    if !(energy > T::zero()) {
        return Err(Error::DegenerateWeights);
    }
    let wiener = hermitian_solve(&m.r, &m.p)?;
    Ok(CMatrix::outer(&wiener, w_bar).scaled(Complex::new(T::one() / energy, T::zero())))
}

/// Projection update used inside the alternation: the component of `S` along
/// `w̄` is replaced by the optimal one, the orthogonal complement is kept.
fn update_projection<T: Real>(s: &CMatrix<T>, m: &MomentSet<T>, w_bar: &CVector<T>) -> Result<CMatrix<T>> {
    let optimal = projection_mmse(m, w_bar)?;
    let energy = w_bar.norm_sqr();
    // S (I − w̄ w̄ᴴ/‖w̄‖²) = S − (S w̄) w̄ᴴ/‖w̄‖²
    let along = CMatrix::outer(&s.mul_vec(w_bar)?, w_bar).scaled(Complex::new(T::one() / energy, T::zero()));
    s.sub(&along)?.add(&optimal)
}

/// Alternates the reduced-filter design and the projection design from
/// `init_s` until the MSE changes by less than `opts.tol`.
pub fn joint_fixed_point<T: Real>(
    m: &MomentSet<T>,
    rank: usize,
    init_s: &CMatrix<T>,
    opts: FixedPointOptions<T>,
) -> Result<JointDesign<T>> {
    check_dim("initial projection rows", m.dim(), init_s.rows())?;
    check_dim("initial projection rank", rank, init_s.cols())?;
    if rank == 0 || rank > m.dim() {
        return Err(Error::InvalidParameter {
            name: "rank",
            reason: format!("need 1 <= D <= M, got D = {rank}, M = {}", m.dim()),
        });
    }
    if opts.max_iters == 0 {
        return Err(Error::InvalidParameter {
            name: "max_iters",
            reason: "at least one alternation is required".into(),
        });
    }
    let mut s = init_s.clone();
    let mut trajectory = Vec::new();
    let mut converged = false;
    let mut w_bar;
    loop {
        w_bar = reduced_w_mmse(&s, m)?;
        let j = mse_given(&s, &w_bar, m)?;
        let prev = trajectory.last().copied();
        trajectory.push(j);
        if let Some(prev) = prev {
            if (prev - j).abs() < opts.tol {
                converged = true;
                break;
            }
        }
        if trajectory.len() >= opts.max_iters {
            break;
        }
        s = update_projection(&s, m, &w_bar)?;
    }
    Ok(JointDesign {
        s,
        w_bar,
        mse_trajectory: trajectory,
        converged,
    })
}

/// `J = σ_d² − 2 Re(w̄ᴴ Sᴴ p) + w̄ᴴ Sᴴ R S w̄`.
pub fn mse_given<T: Real>(s: &CMatrix<T>, w_bar: &CVector<T>, m: &MomentSet<T>) -> Result<T> {
    check_dim("projection rows", m.dim(), s.rows())?;
    let f = s.mul_vec(w_bar)?;
    let cross = f.dot(&m.p)?.re;
    let quad = f.dot(&m.r.mul_vec(&f)?)?.re;
    Ok(m.sigma_d_sq - T::lit(2.0) * cross + quad)
}

/// `J = σ_d² − p̄ᴴ R̄⁻¹ p̄`, the MMSE attainable with projection `S`.
pub fn mmse_given_projection<T: Real>(s: &CMatrix<T>, m: &MomentSet<T>) -> Result<T> {
    let red = ReducedMoments::project(s, m)?;
    let x = hermitian_solve(&red.r_bar, &red.p_bar)?;
    Ok(m.sigma_d_sq - red.p_bar.dot(&x)?.re)
}
