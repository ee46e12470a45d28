//! Scalar abstraction: every floating-point computation in the crate is
//! generic over [`Real`], instantiated with `f64` (the default aliases at the
//! crate root) or `f32`.

use num_traits::{Float, FromPrimitive, ToPrimitive};
use std::fmt::{Debug, Display};
use std::iter::Sum;

/// Floating-point scalar usable throughout the crate.
pub trait Real:
    Float + FromPrimitive + ToPrimitive + Sum + Debug + Display + Send + Sync + 'static
{
    /// Lossy conversion from `f64`, for tabulated constants.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 constant converts to any Real")
    }

    /// Conversion from machine integers (grid sizes, exponents).
    fn of_usize(x: usize) -> Self {
        Self::from_usize(x).expect("usize converts to any Real")
    }

    /// Lossy conversion to `f64`, for reporting.
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {}
impl Real for f32 {}

/// Machine epsilon scaled relative comparison: `|x - y| <= tol * (1 + |x| + |y|)`.
pub fn approx_eq<T: Real>(x: T, y: T, tol: T) -> bool {
    (x - y).abs() <= tol * (T::one() + x.abs() + y.abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conversions_round_trip() {
        let x: f64 = Real::of(1.5);
        assert_eq!(x, 1.5);
        let y: f32 = Real::of(0.25);
        assert_eq!(y, 0.25f32);
        assert_eq!(<f64 as Real>::of_usize(7), 7.0);
    }

    #[test]
    fn approx_eq_scales_with_magnitude() {
        assert!(approx_eq(1.0e12, 1.0e12 + 1.0, 1e-11));
        assert!(!approx_eq(1.0, 1.1, 1e-11));
    }
}
