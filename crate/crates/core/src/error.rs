use thiserror::Error;

/// Errors raised by the numeric kernel, the filters and the oracle designs.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },
    /// A Hermitian factorization hit a pivot below the floor.
    #[error("ill-conditioned solve: pivot magnitude {pivot:.3e} below floor")]
    IllConditioned { pivot: f64 },
    #[error("matrix is not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },
    #[error("no samples")]
    NoSamples,
    #[error("degenerate basis: no column survives orthonormalization")]
    DegenerateBasis,
    #[error("degenerate weights: reduced-rank filter is zero")]
    DegenerateWeights,
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    /// Filter state became non-finite; `step` is the zero-based step index.
    #[error("adaptive filter diverged at step {step}")]
    Divergence { step: u64 },
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(context: &'static str, expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            context,
            expected,
            found,
        })
    }
}
