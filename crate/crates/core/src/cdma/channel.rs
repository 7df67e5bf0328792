use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::{ComplexMatrix, ComplexVector, C64};

/// Upper bound on the channel length in chips.
pub const CHANNEL_WINDOW: usize = 8;
/// Number of resolvable paths.
pub const NUM_PATHS: usize = 3;
/// Mean relative path powers.
pub const PATH_POWERS_DB: [f64; NUM_PATHS] = [0.0, -3.0, -6.0];

/// Mean path powers, scaled so that they sum to one.
pub fn path_powers() -> [f64; NUM_PATHS] {
    let lin = PATH_POWERS_DB.map(|db| 10f64.powf(db / 10.0));
    let total: f64 = lin.iter().sum();
    lin.map(|p| p / total)
}

/// One multipath channel: active path delays (chips) and complex gains.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    pub delays: Vec<usize>,
    pub gains: Vec<C64>,
}

impl ChannelRealization {
    pub fn new(delays: Vec<usize>, gains: Vec<C64>) -> Result<Self> {
        if delays.len() != gains.len() {
            return Err(Error::DimensionMismatch {
                context: "channel paths",
                expected: delays.len(),
                found: gains.len(),
            });
        }
        if let Some(&d) = delays.iter().find(|&&d| d >= CHANNEL_WINDOW) {
            return Err(Error::InvalidParameter {
                name: "delays",
                reason: format!("path delay {d} outside the {CHANNEL_WINDOW}-chip window"),
            });
        }
        Ok(Self { delays, gains })
    }

    /// Single unit path with the given delay.
    pub fn impulse(delay: usize) -> Result<Self> {
        Self::new(vec![delay], vec![C64::new(1.0, 0.0)])
    }

    /// Zero-padded length-`L` tap vector.
    pub fn taps(&self) -> ComplexVector {
        self.taps_with(&self.gains)
    }

    /// Tap vector with the same delays but different path gains.
    pub fn taps_with(&self, gains: &[C64]) -> ComplexVector {
        let mut h = ComplexVector::zeros(CHANNEL_WINDOW);
        for (&d, &g) in self.delays.iter().zip(gains) {
            h[d] += g;
        }
        h
    }
}

/// Path delays: first path at zero, each further path 1 or 2 chips
/// (equiprobable) after the previous one.
pub fn draw_path_delays<R: Rng + ?Sized>(rng: &mut R) -> [usize; NUM_PATHS] {
    let mut delays = [0; NUM_PATHS];
    for k in 1..NUM_PATHS {
        delays[k] = delays[k - 1] + rng.random_range(1..=2);
    }
    delays
}

/// Static 3-path Rayleigh channel with the `0, −3, −6 dB` mean power profile.
pub fn draw_multipath<R: Rng + ?Sized>(rng: &mut R) -> ChannelRealization {
    let delays = draw_path_delays(rng);
    let powers = path_powers();
    let gains = powers
        .iter()
        .map(|&p| {
            let s = (p / 2.0).sqrt();
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            C64::new(s * re, s * im)
        })
        .collect();
    ChannelRealization {
        delays: delays.to_vec(),
        gains,
    }
}

fn chip_time(column: usize, spreading_gain: usize, isi_span: usize) -> isize {
    let block = column / spreading_gain;
    let chip = column % spreading_gain;
    (isi_span as isize - 1 - block as isize) * spreading_gain as isize + chip as isize
}

/// `M × ((2L_s−1)·N)` convolution matrix with `M = N + L − 1`: column `q`
/// holds `h` starting at the row of that chip's arrival time, truncated to the
/// observation window.
pub fn build_convolution_matrix(h: &ComplexVector, spreading_gain: usize, isi_span: usize) -> Result<ComplexMatrix> {
    if h.is_empty() || spreading_gain == 0 || isi_span == 0 {
        return Err(Error::InvalidParameter {
            name: "convolution matrix",
            reason: "channel length, processing gain and ISI span must be positive".into(),
        });
    }
    let len = h.len();
    let rows = spreading_gain + len - 1;
    let cols = (2 * isi_span - 1) * spreading_gain;
    Ok(ComplexMatrix::from_fn(rows, cols, |n, q| {
        let lag = n as isize - chip_time(q, spreading_gain, isi_span);
        if (0..len as isize).contains(&lag) {
            h[lag as usize]
        } else {
            C64::new(0.0, 0.0)
        }
    }))
}

/// Effective signature matrix `H C` (`M × (2L_s−1)`), evaluated directly as
/// the windowed convolution of each shifted code copy with the channel.
pub fn effective_signatures(code: &[f64], h: &ComplexVector, isi_span: usize) -> ComplexMatrix {
    let n_chips = code.len();
    let len = h.len();
    let rows = n_chips + len - 1;
    let blocks = 2 * isi_span - 1;
    let mut g = ComplexMatrix::zeros(rows, blocks);
    for j in 0..blocks {
        let start = (isi_span as isize - 1 - j as isize) * n_chips as isize;
        for (c, &chip) in code.iter().enumerate() {
            let t = start + c as isize;
            for l in 0..len {
                let n = t + l as isize;
                if (0..rows as isize).contains(&n) {
                    g[(n as usize, j)] += h[l] * chip;
                }
            }
        }
    }
    g
}
