use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Log-normal amplitude spread: each user's power in dB is drawn from
/// `N(0, sigma_db²)` around the nominal (unit) power. Returns amplitudes.
pub fn lognormal_powers<R: Rng + ?Sized>(num_users: usize, sigma_db: f64, rng: &mut R) -> Result<Vec<f64>> {
    if !(sigma_db >= 0.0) || !sigma_db.is_finite() {
        return Err(Error::InvalidParameter {
            name: "power_sigma_db",
            reason: format!("standard deviation must be finite and nonnegative, got {sigma_db}"),
        });
    }
    Ok((0..num_users)
        .map(|_| {
            let z: f64 = rng.sample(StandardNormal);
            10f64.powf(sigma_db * z / 20.0)
        })
        .collect())
}
