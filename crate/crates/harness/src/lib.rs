//! Monte Carlo experiment driver for the reduced-rank CDMA receivers:
//! learning curves, rank sweeps, BER tracking in fading, operation counts
//! and CSV output.

pub mod complexity;
pub mod config;
pub mod csv;
pub mod curve;
pub mod error;
pub mod experiments;

pub use config::ExperimentConfig;
pub use curve::{Curve, Series};
pub use error::{HarnessError, Result};
