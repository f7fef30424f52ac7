//! Scalar abstraction: the numeric core works with `f32` or `f64`.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive};

/// Floating-point scalar type the library is generic over.
///
/// All accuracy statements in this crate assume `f64`; with `f32` every
/// tolerance degrades in proportion to the type's epsilon.
pub trait Scalar: Float + FromPrimitive + Debug + Display + Send + Sync + 'static {}

impl<T> Scalar for T where T: Float + FromPrimitive + Debug + Display + Send + Sync + 'static {}

/// Lift an `f64` constant into the scalar type.
#[inline]
pub(crate) fn flt<T: Scalar>(x: f64) -> T {
    T::from_f64(x).expect("f64 constant must be representable in the scalar type")
}

/// True when `v` is a finite, strictly positive number (NaN rejected).
#[inline]
pub(crate) fn positive_finite<T: Scalar>(v: T) -> bool {
    v.is_finite() && v > T::zero()
}

/// True when `v` lies in `[0, 1]` (NaN rejected).
#[inline]
pub(crate) fn in_unit_interval<T: Scalar>(v: T) -> bool {
    (T::zero()..=T::one()).contains(&v)
}
