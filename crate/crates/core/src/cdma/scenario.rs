use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{generate_codes, lognormal_powers, CHANNEL_WINDOW};
use crate::error::{Error, Result};

/// Size and power parameters of a CDMA scenario.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioParams {
    pub num_users: usize,
    /// Chips per symbol, `N`.
    pub spreading_gain: usize,
    /// Channel length bound in chips, `L`.
    pub channel_window: usize,
    /// ISI span `L_s` in symbols.
    pub isi_span: usize,
    /// SNR of the desired user (user 1) in dB.
    pub snr_db: f64,
    /// Standard deviation of the log-normal power spread in dB.
    pub power_sigma_db: f64,
}

impl Default for ScenarioParams {
    fn default() -> Self {
        Self {
            num_users: 6,
            spreading_gain: 16,
            channel_window: CHANNEL_WINDOW,
            isi_span: 2,
            snr_db: 15.0,
            power_sigma_db: 1.5,
        }
    }
}

impl ScenarioParams {
    /// Observation dimension `M = N + L − 1`.
    pub fn observation_dim(&self) -> usize {
        self.spreading_gain + self.channel_window - 1
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |name, reason: String| Err(Error::InvalidParameter { name, reason });
        if self.num_users == 0 {
            return fail("num_users", "at least one user is required".into());
        }
        if self.spreading_gain < 2 {
            return fail("spreading_gain", format!("must be at least 2, got {}", self.spreading_gain));
        }
        if self.channel_window != CHANNEL_WINDOW {
            return fail(
                "channel_window",
                format!("only the {CHANNEL_WINDOW}-chip window is supported, got {}", self.channel_window),
            );
        }
        if self.isi_span == 0 {
            return fail("isi_span", "must be at least 1".into());
        }
        if !self.snr_db.is_finite() {
            return fail("snr_db", format!("must be finite, got {}", self.snr_db));
        }
        if !(self.power_sigma_db >= 0.0 && self.power_sigma_db.is_finite()) {
            return fail("power_sigma_db", format!("must be nonnegative, got {}", self.power_sigma_db));
        }
        Ok(())
    }
}

/// A concrete scenario: parameters plus the drawn signatures and amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct CdmaScenario {
    pub params: ScenarioParams,
    /// Amplitude `A_k` per user (`A_1` first).
    pub amplitudes: Vec<f64>,
    /// Unit-norm ±1/√N signatures.
    pub codes: Vec<Vec<f64>>,
    pub seed: u64,
}

impl CdmaScenario {
    /// Draws codes and log-normal amplitudes from `seed`.
    pub fn draw(params: ScenarioParams, seed: u64) -> Result<Self> {
        params.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let codes = generate_codes(params.num_users, params.spreading_gain, &mut rng)?;
        let amplitudes = lognormal_powers(params.num_users, params.power_sigma_db, &mut rng)?;
        Self::from_parts(params, amplitudes, codes, seed)
    }

    pub fn from_parts(params: ScenarioParams, amplitudes: Vec<f64>, codes: Vec<Vec<f64>>, seed: u64) -> Result<Self> {
        params.validate()?;
        if amplitudes.len() != params.num_users || codes.len() != params.num_users {
            return Err(Error::DimensionMismatch {
                context: "scenario users",
                expected: params.num_users,
                found: amplitudes.len().min(codes.len()),
            });
        }
        if let Some(a) = amplitudes.iter().find(|a| !(**a > 0.0 && a.is_finite())) {
            return Err(Error::InvalidParameter {
                name: "amplitudes",
                reason: format!("amplitudes must be positive, got {a}"),
            });
        }
        for code in &codes {
            if code.len() != params.spreading_gain {
                return Err(Error::DimensionMismatch {
                    context: "signature length",
                    expected: params.spreading_gain,
                    found: code.len(),
                });
            }
            let norm = code.iter().map(|c| c * c).sum::<f64>().sqrt();
            if (norm - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidParameter {
                    name: "codes",
                    reason: format!("signatures must have unit norm, got {norm}"),
                });
            }
        }
        Ok(Self {
            params,
            amplitudes,
            codes,
            seed,
        })
    }

    pub fn observation_dim(&self) -> usize {
        self.params.observation_dim()
    }

    /// `2L_s − 1`, the length of each user's symbol window.
    pub fn symbol_window(&self) -> usize {
        2 * self.params.isi_span - 1
    }

    /// Position of `b_k(i)` inside the symbol window.
    pub fn current_symbol_index(&self) -> usize {
        self.params.isi_span - 1
    }

    /// Noise variance per complex sample, `σ² = A_1² / 10^{SNR/10}`.
    pub fn noise_variance(&self) -> f64 {
        self.amplitudes[0].powi(2) / 10f64.powf(self.params.snr_db / 10.0)
    }
}
