//! Floating-point abstraction shared by every solver.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Real scalar the solvers are generic over. Implemented for `f32` and `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + NumAssign + Sum + Debug + Display + LowerExp + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal. Panics only if the value is not representable,
    /// which cannot happen for the finite constants used in this crate.
    #[inline]
    fn cst(v: f64) -> Self {
        Self::from_f64(v).expect("finite constant representable in target float")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    #[inline]
    fn half() -> Self {
        Self::cst(0.5)
    }

    #[inline]
    fn two() -> Self {
        Self::cst(2.0)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Converts a slice to `f64` for reporting.
pub(crate) fn to_f64_vec<T: Real>(v: &[T]) -> Vec<f64> {
    v.iter().map(|x| x.as_f64()).collect()
}
