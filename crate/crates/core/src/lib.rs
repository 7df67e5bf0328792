//! Reduced-rank adaptive filtering built around a jointly adapted projection
//! matrix and reduced-rank filter.
//!
//! The crate is layered bottom-up:
//!
//! - [`numkernel`]: complex vectors and matrices, Hermitian solves, sample
//!   moments and column orthonormalization.
//! - [`filters`]: online estimators (full-rank LMS, the joint projection/filter
//!   LMS pair, a Krylov-projection baseline) and the BPSK slicer.
//! - [`oracle`]: batch MMSE designs computed from second-order statistics.
//! - [`cdma`]: a synchronous uplink DS-CDMA signal model with multipath,
//!   Clarke fading and log-normal power spread.
//!
//! The numeric layers are generic over the real scalar (`f32`/`f64`); the
//! aliases at the crate root fix the double-precision types every experiment
//! uses.

pub mod cdma;
pub mod error;
pub mod filters;
pub mod numkernel;
pub mod oracle;
pub mod scalar;

pub use error::{Error, Result};
pub use num_complex::Complex;
pub use scalar::Real;

/// Double-precision complex scalar.
pub type C64 = Complex<f64>;
/// Double-precision complex vector.
pub type ComplexVector = numkernel::CVector<f64>;
/// Double-precision complex matrix.
pub type ComplexMatrix = numkernel::CMatrix<f64>;
/// Second-order statistics in double precision.
pub type MomentSet = numkernel::MomentSet<f64>;
/// Joint projection/filter LMS state in double precision.
pub type JioState = filters::JioState<f64>;
/// Full-rank LMS state in double precision.
pub type FullRankState = filters::FullRankState<f64>;
/// Krylov-projection baseline in double precision.
pub type KrylovLms = filters::KrylovLms<f64>;
/// Filter output/error pair in double precision.
pub type StepOutput = filters::StepOutput<f64>;
/// Result of the alternating MMSE design in double precision.
pub type JointDesign = oracle::JointDesign<f64>;
