//! Scalar abstraction shared by every numerical module.

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};
use std::fmt::{Debug, Display};
use std::iter::Sum;

/// Floating point type the crate is generic over: `f32` or `f64`.
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
    + 'static
{
    /// Converts an `f64` literal, panicking only if the target cannot hold it.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Real for T where
    T: Float
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
        + 'static
{
}

/// `|x|^p` with the convention `0^0 = 1`.
#[inline]
pub fn abs_pow<T: Real>(x: T, p: T) -> T {
    let a = x.abs();
    if p == T::zero() {
        T::one()
    } else if p == T::one() {
        a
    } else if p == T::lit(2.0) {
        a * a
    } else if p == T::lit(3.0) {
        a * a * a
    } else {
        a.powf(p)
    }
}

/// `sign(x)·|x|^p`.
#[inline]
pub fn signed_pow<T: Real>(x: T, p: T) -> T {
    let m = abs_pow(x, p);
    if x < T::zero() {
        -m
    } else {
        m
    }
}

/// Relative distance `|a - b| / max(|a|, |b|, floor)`.
#[inline]
pub fn rel_diff<T: Real>(a: T, b: T, floor: T) -> T {
    (a - b).abs() / a.abs().max(b.abs()).max(floor)
}
