//! Scalar abstraction for the numerical core.

use std::fmt::Display;

use nalgebra::Scalar;
use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};

/// Floating-point scalar the numerical core is generic over.
///
/// Implemented by `f32` and `f64`. Bundles the arithmetic, transcendental,
/// and conversion traits the algorithms need so signatures stay short.
pub trait Real:
    Float + NumAssign + FromPrimitive + ToPrimitive + Scalar + Display + Send + Sync
{
    /// Converts an `f64` constant into `Self`. Panics only when the value has
    /// no finite representation, which never happens for the constants used
    /// in this crate with `f32` or `f64`.
    #[inline]
    fn lit(value: f64) -> Self {
        Self::from_f64(value).expect("finite f64 constant")
    }

    /// Converts to `f64` for reporting; NaN when the value cannot convert.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Real for T where
    T: Float + NumAssign + FromPrimitive + ToPrimitive + Scalar + Display + Send + Sync
{
}
