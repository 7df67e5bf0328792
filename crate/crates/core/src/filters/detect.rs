use num_complex::Complex;

use crate::scalar::Real;

/// BPSK slicer on the real part of the filter output. `Re(x) = 0` maps to `+1`.
pub fn detect_bpsk<T: Real>(x: Complex<T>) -> T {
    if x.re >= T::zero() {
        T::one()
    } else {
        -T::one()
    }
}
