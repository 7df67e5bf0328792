//! Synchronous uplink DS-CDMA signal model.
//!
//! After chip-matched filtering and chip-rate sampling, the observation for
//! symbol `i` is the `M = N + L − 1` sample window
//!
//! ```text
//! r(i) = Σ_k H_k(i) A_k C_k b_k(i) + n(i)
//! ```
//!
//! where `C_k` stacks `2L_s − 1` chip-shifted copies of user `k`'s signature,
//! `H_k(i)` convolves with the length-`L` multipath channel, and
//! `b_k(i) = [b_k(i+L_s−1) … b_k(i) … b_k(i−L_s+1)]ᵀ`. Column `j` of `C_k`
//! therefore carries symbol `b_k(i+L_s−1−j)`, whose first chip falls
//! `(L_s−1−j)·N` chips after the start of symbol `i`.

mod channel;
mod codes;
mod fading;
mod link;
mod power;
mod scenario;

pub use channel::{
    build_convolution_matrix, draw_multipath, draw_path_delays, effective_signatures, path_powers,
    ChannelRealization, CHANNEL_WINDOW, NUM_PATHS, PATH_POWERS_DB,
};
pub use codes::{build_code_matrix, generate_codes};
pub use fading::{clarke_fading, ClarkeProcess, NUM_SINUSOIDS};
pub use link::{synthesize_received, CdmaLink, ChannelKind, SymbolFrame};
pub use power::lognormal_powers;
pub use scenario::{CdmaScenario, ScenarioParams};
