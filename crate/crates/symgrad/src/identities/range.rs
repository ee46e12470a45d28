//! Admissible exponent thresholds per dimension.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Open interval `(p_minus, p_plus)` of admissible exponents in dimension
/// `dim`; `p_plus` is infinite below dimension 8.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdmissibleRange<T> {
    pub dim: usize,
    pub p_minus: T,
    pub p_plus: T,
}

/// Closed-form thresholds:
///
/// * `p_minus = 2 - 5/(2(4 + sqrt 6))` in dimension 2,
///   `2 - 1/(sqrt(n+1) + 1)` for `n >= 3`;
/// * `p_plus = infinity` for `n <= 7`, `2 + 1/(sqrt(n+1) - 1)` for `n >= 8`.
pub fn admissible_range<T: Real>(dim: usize) -> Result<AdmissibleRange<T>> {
    if dim < 2 {
        return Err(Error::Domain(format!("thresholds are defined for n >= 2, got {dim}")));
    }
    let two = T::of(2.0);
    let p_minus = if dim == 2 {
        two - T::of(5.0) / (two * (T::of(4.0) + T::of(6.0).sqrt()))
    } else {
        let root = (T::of_usize(dim) + T::one()).sqrt();
        two - T::one() / (root + T::one())
    };
    let p_plus = if dim <= 7 {
        T::infinity()
    } else {
        let root = (T::of_usize(dim) + T::one()).sqrt();
        two + T::one() / (root - T::one())
    };
    Ok(AdmissibleRange { dim, p_minus, p_plus })
}
