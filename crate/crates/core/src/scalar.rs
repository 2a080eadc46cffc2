//! Scalar abstraction shared by the algebra, SE(3) and linear-algebra layers.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point scalar the dual-quaternion tower is built over: `f32` or `f64`.
///
/// Each implementation carries its own tolerances, since a nilpotency
/// threshold that is sensible in double precision is meaningless in single.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Sum + Send + Sync + 'static
{
    /// Threshold below which a real coordinate counts as zero, relative to the
    /// operand magnitude `max(1, |dual part|)`.
    const TAU_ZERO: Self;
    /// Default verification tolerance for algebraic identities.
    const TAU_NUM: Self;
    /// Tolerance used to validate externally supplied poses and matrices.
    const TAU_LOOSE: Self;

    /// Converts an `f64` literal, panicking only for types that cannot
    /// represent finite doubles (never the case for `f32`/`f64`).
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite scalar converts to f64")
    }

    #[inline]
    fn two() -> Self {
        Self::one() + Self::one()
    }

    #[inline]
    fn half() -> Self {
        Self::lit(0.5)
    }
}

impl Real for f64 {
    const TAU_ZERO: Self = 1e-12;
    const TAU_NUM: Self = 1e-9;
    const TAU_LOOSE: Self = 1e-6;
}

impl Real for f32 {
    const TAU_ZERO: Self = 1e-6;
    const TAU_NUM: Self = 1e-4;
    const TAU_LOOSE: Self = 1e-3;
}

/// `true` when `value` is zero relative to `scale` (clamped below by one).
#[inline]
pub(crate) fn is_negligible<T: Real>(value: T, scale: T) -> bool {
    value.abs() <= T::TAU_ZERO * scale.abs().max(T::one())
}
