//! Scalar abstraction: every numerical routine in this crate is generic over
//! [`Real`], instantiated at `f32` or `f64`.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point scalar usable throughout the crate.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + Sum
    + Send
    + Sync
    + 'static
{
    /// Convert an `f64` constant into this scalar type.
    #[inline]
    fn of(v: f64) -> Self {
        Self::from_f64(v).expect("finite constant")
    }

    /// Lossy view of the value as `f64`, for diagnostics and reports.
    #[inline]
    fn lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Shorthand for `Self::of(v as f64)` on small integers.
    #[inline]
    fn of_usize(v: usize) -> Self {
        Self::from_usize(v).expect("small integer")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Midpoint that avoids overflow for extreme magnitudes.
#[inline]
pub fn midpoint<T: Real>(a: T, b: T) -> T {
    let half = T::of(0.5);
    a * half + b * half
}
