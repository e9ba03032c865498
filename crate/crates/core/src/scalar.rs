//! Scalar abstraction for the cost arithmetic.
//!
//! Every cost amount, fraction and percentage in the model is generic over
//! [`Scalar`], implemented for `f32` and `f64`. The crate root exposes `f64`
//! aliases for the common case.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{AddAssign, MulAssign, SubAssign};

use num_traits::{Float, FromPrimitive, ToPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;

pub trait Scalar:
    Float
    + FromPrimitive
    + ToPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + Sum
    + Default
    + Debug
    + Display
    + Serialize
    + DeserializeOwned
    + Send
    + Sync
    + 'static
{
    /// Absolute tolerance used for fraction and split comparisons.
    fn tolerance() -> Self;

    /// Lossy conversion from an `f64` literal.
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal representable in scalar type")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    fn tolerance() -> Self {
        1e-9
    }
}

impl Scalar for f32 {
    // f32 cannot resolve 1e-9 on unit-scale sums.
    fn tolerance() -> Self {
        1e-5
    }
}

/// Percentage of `part` in `whole`, or zero when `whole` is zero.
pub(crate) fn pct<T: Scalar>(part: T, whole: T) -> T {
    if whole > T::zero() {
        T::lit(100.0) * part / whole
    } else {
        T::zero()
    }
}
