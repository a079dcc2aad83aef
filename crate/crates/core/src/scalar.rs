//! Scalar abstraction shared by the closed-form parts of the library.

use std::fmt::Debug;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real floating point scalar (`f32` or `f64`).
///
/// Implemented automatically for every type satisfying the super-traits.
pub trait Real: Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Send + Sync + 'static {
    /// Converts an `f64` literal into the scalar type.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Real for T where T: Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Send + Sync + 'static {}
