//! Complex linear algebra substrate: dense vectors and matrices, Hermitian
//! solves, sample second-order statistics and Gram-Schmidt orthonormalization.
//!
//! Everything here is a pure function of its inputs. Values are immutable
//! once built unless explicitly borrowed mutably.

mod matrix;
mod moments;
mod ortho;
mod solve;
mod vector;

pub use matrix::CMatrix;
pub use moments::{estimate_moments, MomentAccumulator, MomentSet};
pub use ortho::{orthogonalize_against, orthonormalize_columns, DEFLATION_TOL};
pub use solve::{hermitian_solve, Cholesky, HERMITIAN_TOL, PIVOT_FLOOR};
pub use vector::CVector;
