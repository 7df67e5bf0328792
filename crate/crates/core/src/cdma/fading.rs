//! Clarke (isotropic scattering) flat-fading processes.
//!
//! Each process is a sum of `NUM_SINUSOIDS` unit phasors with Doppler shifts
//! `f_d cos α_n`. The arrival angles are stratified, `α_n = (2πn + θ)/N_s`
//! with a single random offset `θ`, and the initial phases are uniform, so
//! the ensemble autocorrelation is `J₀(2π f_d T k)` at lag `k` and each
//! realization tracks it closely as well.

use std::f64::consts::PI;

use rand::Rng;

use crate::error::{Error, Result};
use crate::C64;

pub const NUM_SINUSOIDS: usize = 64;

/// Unit-power Clarke fading gain sampled once per symbol.
#[derive(Debug, Clone)]
pub struct ClarkeProcess {
    phasors: Vec<C64>,
    rotations: Vec<C64>,
    scale: f64,
}

impl ClarkeProcess {
    /// `normalized_doppler` is `f_d T` and must lie in `(0, 0.5)`.
    pub fn new<R: Rng + ?Sized>(normalized_doppler: f64, rng: &mut R) -> Result<Self> {
        if !(normalized_doppler > 0.0 && normalized_doppler < 0.5) {
            return Err(Error::InvalidParameter {
                name: "normalized_doppler",
                reason: format!("f_d T must lie in (0, 0.5), got {normalized_doppler}"),
            });
        }
        let offset = rng.random::<f64>() * 2.0 * PI;
        let n = NUM_SINUSOIDS as f64;
        let mut phasors = Vec::with_capacity(NUM_SINUSOIDS);
        let mut rotations = Vec::with_capacity(NUM_SINUSOIDS);
        for k in 0..NUM_SINUSOIDS {
            let alpha = (2.0 * PI * k as f64 + offset) / n;
            let phase = rng.random::<f64>() * 2.0 * PI;
            phasors.push(C64::from_polar(1.0, phase));
            rotations.push(C64::from_polar(1.0, 2.0 * PI * normalized_doppler * alpha.cos()));
        }
        Ok(Self {
            phasors,
            rotations,
            scale: 1.0 / n.sqrt(),
        })
    }

    /// Current gain.
    pub fn value(&self) -> C64 {
        self.phasors.iter().sum::<C64>() * self.scale
    }

    /// Moves to the next symbol.
    pub fn advance(&mut self) {
        for (p, r) in self.phasors.iter_mut().zip(&self.rotations) {
            *p *= r;
        }
    }
}

/// `num_taps` independent unit-variance Clarke trajectories of
/// `num_symbols` samples each, indexed `[tap][symbol]`.
pub fn clarke_fading<R: Rng + ?Sized>(
    normalized_doppler: f64,
    num_symbols: usize,
    num_taps: usize,
    rng: &mut R,
) -> Result<Vec<Vec<C64>>> {
    (0..num_taps)
        .map(|_| {
            let mut proc = ClarkeProcess::new(normalized_doppler, rng)?;
            Ok((0..num_symbols)
                .map(|_| {
                    let v = proc.value();
                    proc.advance();
                    v
                })
                .collect())
        })
        .collect()
}
