//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Real scalar the library is generic over (`f32` or `f64`).
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + serde::Serialize
    + 'static
{
    /// Converts an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    /// A tolerance that never drops below a few ulps of the scalar type.
    #[inline]
    fn tol(x: f64) -> Self {
        Self::lit(x).max(Self::epsilon() * Self::lit(64.0))
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable in scalar type")
    }

    #[inline]
    fn from_i32_lossy(n: i32) -> Self {
        Self::from_i32(n).expect("i32 representable in scalar type")
    }
}

impl Real for f32 {}
impl Real for f64 {}

#[cfg(test)]
#[inline]
pub(crate) fn c<T: Real>(re: f64, im: f64) -> Complex<T> {
    Complex::new(T::lit(re), T::lit(im))
}

#[inline]
pub(crate) fn cr<T: Real>(re: T) -> Complex<T> {
    Complex::new(re, T::zero())
}

#[inline]
pub(crate) fn is_finite<T: Real>(z: Complex<T>) -> bool {
    z.re.is_finite() && z.im.is_finite()
}
