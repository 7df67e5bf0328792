use rand::Rng;

use crate::error::{Error, Result};
use crate::{ComplexMatrix, C64};

/// Random ±1/√N signatures, one per user, chips i.i.d. and equiprobable.
pub fn generate_codes<R: Rng + ?Sized>(
    num_users: usize,
    spreading_gain: usize,
    rng: &mut R,
) -> Result<Vec<Vec<f64>>> {
    if num_users == 0 {
        return Err(Error::InvalidParameter {
            name: "num_users",
            reason: "at least one user is required".into(),
        });
    }
    if spreading_gain < 2 {
        return Err(Error::InvalidParameter {
            name: "spreading_gain",
            reason: format!("processing gain must be at least 2, got {spreading_gain}"),
        });
    }
    let amp = 1.0 / (spreading_gain as f64).sqrt();
    Ok((0..num_users)
        .map(|_| {
            (0..spreading_gain)
                .map(|_| if rng.random_bool(0.5) { amp } else { -amp })
                .collect()
        })
        .collect())
}

/// Block-diagonal `((2L_s−1)·N) × (2L_s−1)` matrix whose column `j` holds the
/// signature at chip offset `j·N`.
pub fn build_code_matrix(code: &[f64], isi_span: usize) -> Result<ComplexMatrix> {
    if isi_span == 0 {
        return Err(Error::InvalidParameter {
            name: "isi_span",
            reason: "ISI span must be at least 1".into(),
        });
    }
    if code.is_empty() {
        return Err(Error::InvalidParameter {
            name: "code",
            reason: "empty signature".into(),
        });
    }
    let n = code.len();
    let blocks = 2 * isi_span - 1;
    Ok(ComplexMatrix::from_fn(blocks * n, blocks, |row, col| {
        if row / n == col {
            C64::new(code[row % n], 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    }))
}
