//! Scalar abstraction for the numeric parts of the toolkit.
//!
//! Models, metrics and feature transforms are generic over [`Real`] so the
//! same code runs in `f32` or `f64`. The pipeline and CLI use `f64`.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumCast};
use serde::{de::DeserializeOwned, Serialize};

/// Floating-point scalar: `f32` or `f64`.
pub trait Real:
    Float
    + FromPrimitive
    + NumCast
    + Sum
    + Debug
    + Display
    + Serialize
    + DeserializeOwned
    + Send
    + Sync
    + 'static
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Lossy conversion from `f64`; panics only for scalar types that cannot
/// represent ordinary finite values, which `f32`/`f64` always can.
#[inline]
pub fn real<R: Real>(x: f64) -> R {
    R::from_f64(x).expect("finite f64 converts to Real")
}

/// Conversion from a count.
#[inline]
pub fn real_usize<R: Real>(n: usize) -> R {
    R::from_usize(n).expect("usize converts to Real")
}

#[inline]
pub fn to_f64<R: Real>(x: R) -> f64 {
    x.to_f64().expect("Real converts to f64")
}
