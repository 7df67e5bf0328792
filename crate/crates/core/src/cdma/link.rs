use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{draw_multipath, effective_signatures, path_powers, CdmaScenario, ChannelRealization, ClarkeProcess};
use crate::error::{check_dim, Error, Result};
use crate::MomentSet;
use crate::{ComplexMatrix, ComplexVector, C64};

const STREAM_CHANNEL: u64 = 1;
const STREAM_SYMBOLS: u64 = 2;
const STREAM_NOISE: u64 = 3;

/// One received observation together with everything that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolFrame {
    pub index: u64,
    /// Per-user symbol windows `b_k(i)`, newest symbol first.
    pub symbols: Vec<Vec<f64>>,
    pub noise: ComplexVector,
    pub received: ComplexVector,
    /// `b_1(i)`, the desired user's current symbol.
    pub desired: f64,
}

/// Eq.-16 style superposition `Σ_k H_k A_k C_k b_k + n` for given per-user
/// channel tap vectors and symbol windows.
pub fn synthesize_received(
    scenario: &CdmaScenario,
    channels: &[ComplexVector],
    symbols: &[Vec<f64>],
    noise: &ComplexVector,
) -> Result<ComplexVector> {
    let k = scenario.params.num_users;
    check_dim("channels per user", k, channels.len())?;
    check_dim("symbol windows per user", k, symbols.len())?;
    let m = scenario.observation_dim();
    check_dim("noise length", m, noise.len())?;
    let mut r = noise.clone();
    for user in 0..k {
        check_dim("channel length", scenario.params.channel_window, channels[user].len())?;
        check_dim("symbol window", scenario.symbol_window(), symbols[user].len())?;
        let g = effective_signatures(&scenario.codes[user], &channels[user], scenario.params.isi_span);
        accumulate(&mut r, &g, scenario.amplitudes[user], &symbols[user]);
    }
    Ok(r)
}

fn accumulate(r: &mut ComplexVector, signatures: &ComplexMatrix, amplitude: f64, symbols: &[f64]) {
    for (j, &b) in symbols.iter().enumerate() {
        let coef = amplitude * b;
        for n in 0..signatures.rows() {
            r[n] += signatures[(n, j)] * coef;
        }
    }
}

/// How the per-user channels evolve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChannelKind {
    /// One Rayleigh draw per user, fixed for the whole run.
    Static,
    /// Path gains follow independent Clarke processes (`f_d T` per symbol).
    Clarke { normalized_doppler: f64 },
    /// Single unit path at zero delay for every user.
    Identity,
}

#[derive(Debug, Clone)]
struct UserLink {
    paths: ChannelRealization,
    fading: Vec<ClarkeProcess>,
    symbols: VecDeque<f64>,
    signatures: ComplexMatrix,
}

/// Deterministic frame source for one Monte Carlo run.
///
/// Channel, symbol and noise draws use separate ChaCha streams of the same
/// seed, so e.g. turning the noise off leaves symbols and channels unchanged.
#[derive(Debug, Clone)]
pub struct CdmaLink {
    scenario: CdmaScenario,
    kind: ChannelKind,
    users: Vec<UserLink>,
    symbol_rng: ChaCha8Rng,
    noise_rng: ChaCha8Rng,
    noise_std: f64,
    index: u64,
}

impl CdmaLink {
    pub fn new(scenario: CdmaScenario, kind: ChannelKind, seed: u64) -> Result<Self> {
        Self::with_noise_variance(scenario.clone(), kind, seed, scenario.noise_variance())
    }

    /// Same as [`new`](Self::new) with an explicit noise variance.
    pub fn with_noise_variance(scenario: CdmaScenario, kind: ChannelKind, seed: u64, noise_variance: f64) -> Result<Self> {
        if !(noise_variance >= 0.0 && noise_variance.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "noise_variance",
                reason: format!("must be finite and nonnegative, got {noise_variance}"),
            });
        }
        let stream = |s| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(s);
            rng
        };
        let mut channel_rng = stream(STREAM_CHANNEL);
        let mut symbol_rng = stream(STREAM_SYMBOLS);
        let window = scenario.symbol_window();
        let mut users = Vec::with_capacity(scenario.params.num_users);
        for code in &scenario.codes {
            let (paths, fading) = match kind {
                ChannelKind::Static => (draw_multipath(&mut channel_rng), Vec::new()),
                ChannelKind::Identity => (ChannelRealization::impulse(0)?, Vec::new()),
                ChannelKind::Clarke { normalized_doppler } => {
                    let mut paths = draw_multipath(&mut channel_rng);
                    let fading = (0..paths.delays.len())
                        .map(|_| ClarkeProcess::new(normalized_doppler, &mut channel_rng))
                        .collect::<Result<Vec<_>>>()?;
                    paths.gains = fading_gains(&fading);
                    (paths, fading)
                }
            };
            let symbols = (0..window).map(|_| random_symbol(&mut symbol_rng)).collect();
            let signatures = effective_signatures(code, &paths.taps(), scenario.params.isi_span);
            users.push(UserLink {
                paths,
                fading,
                symbols,
                signatures,
            });
        }
        Ok(Self {
            scenario,
            kind,
            users,
            symbol_rng,
            noise_rng: stream(STREAM_NOISE),
            noise_std: (noise_variance / 2.0).sqrt(),
            index: 0,
        })
    }

    pub fn scenario(&self) -> &CdmaScenario {
        &self.scenario
    }

    pub fn kind(&self) -> ChannelKind {
        self.kind
    }

    pub fn noise_variance(&self) -> f64 {
        2.0 * self.noise_std * self.noise_std
    }

    /// Index of the next frame.
    pub fn index(&self) -> u64 {
        self.index
    }

    /// Channel tap vectors `h_k` of the most recent frame (or of frame 0
    /// before any frame was drawn).
    pub fn channels(&self) -> Vec<ComplexVector> {
        self.users.iter().map(|u| u.paths.taps()).collect()
    }

    pub fn channel_paths(&self) -> Vec<ChannelRealization> {
        self.users.iter().map(|u| u.paths.clone()).collect()
    }

    pub fn next_frame(&mut self) -> SymbolFrame {
        if self.index > 0 {
            self.advance_channels();
        }
        let m = self.scenario.observation_dim();
        let noise = ComplexVector::from_fn(m, |_| {
            let re: f64 = self.noise_rng.sample(StandardNormal);
            let im: f64 = self.noise_rng.sample(StandardNormal);
            C64::new(re * self.noise_std, im * self.noise_std)
        });
        let mut received = noise.clone();
        let mut symbols = Vec::with_capacity(self.users.len());
        for (user, link) in self.users.iter_mut().enumerate() {
            link.symbols.pop_back();
            link.symbols.push_front(random_symbol(&mut self.symbol_rng));
            let window: Vec<f64> = link.symbols.iter().copied().collect();
            accumulate(&mut received, &link.signatures, self.scenario.amplitudes[user], &window);
            symbols.push(window);
        }
        let desired = symbols[0][self.scenario.current_symbol_index()];
        let frame = SymbolFrame {
            index: self.index,
            symbols,
            noise,
            received,
            desired,
        };
        self.index += 1;
        frame
    }

    fn advance_channels(&mut self) {
        if self.kind == ChannelKind::Static || self.kind == ChannelKind::Identity {
            return;
        }
        let isi_span = self.scenario.params.isi_span;
        for (link, code) in self.users.iter_mut().zip(&self.scenario.codes) {
            for p in link.fading.iter_mut() {
                p.advance();
            }
            link.paths.gains = fading_gains(&link.fading);
            link.signatures = effective_signatures(code, &link.paths.taps(), isi_span);
        }
    }

    /// Exact second-order statistics of the current frame's channel state for
    /// the desired symbol `b_1(i)`:
    /// `R = Σ_k A_k² G_k G_kᴴ + σ² I`, `p = A_1 G_1 e_{L_s}`, `σ_d² = 1`,
    /// with `G_k = H_k C_k`.
    pub fn true_moments(&self) -> MomentSet {
        let m = self.scenario.observation_dim();
        let mut r = ComplexMatrix::zeros(m, m);
        for (link, &a) in self.users.iter().zip(&self.scenario.amplitudes) {
            let g = &link.signatures;
            let a2 = a * a;
            for i in 0..m {
                for j in i..m {
                    let mut acc = C64::new(0.0, 0.0);
                    for c in 0..g.cols() {
                        acc += g[(i, c)] * g[(j, c)].conj();
                    }
                    r[(i, j)] += acc * a2;
                }
            }
        }
        let s2 = self.noise_variance();
        for i in 0..m {
            r[(i, i)] = C64::new(r[(i, i)].re + s2, 0.0);
            for j in i + 1..m {
                r[(j, i)] = r[(i, j)].conj();
            }
        }
        let g1 = &self.users[0].signatures;
        let col = self.scenario.current_symbol_index();
        let p = ComplexVector::from_fn(m, |n| g1[(n, col)] * self.scenario.amplitudes[0]);
        MomentSet {
            r,
            p,
            sigma_d_sq: 1.0,
            sample_count: 0,
        }
    }
}

fn fading_gains(fading: &[ClarkeProcess]) -> Vec<C64> {
    path_powers()
        .iter()
        .zip(fading)
        .map(|(&p, f)| f.value() * p.sqrt())
        .collect()
}

fn random_symbol<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    if rng.random_bool(0.5) {
        1.0
    } else {
        -1.0
    }
}
