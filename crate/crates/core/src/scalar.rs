//! Scalar abstraction shared by the numeric modules.

use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Real floating-point type the numeric kernels are generic over.
///
/// Implemented for `f32` and `f64`. Tolerances throughout the crate are
/// quoted for `f64`; [`Scalar::tol`] rescales them by the ratio of machine
/// epsilons so the same thresholds stay meaningful at lower precision.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + NumAssign + Debug + Display + LowerExp + Send + Sync + 'static
{
    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in every Scalar")
    }

    /// An `f64` tolerance rescaled to this type's precision.
    #[inline]
    fn tol(x: f64) -> Self {
        let ratio = Self::epsilon().to_f64().unwrap_or(f64::EPSILON) / f64::EPSILON;
        Self::lit(x * ratio.max(1.0))
    }

    #[inline]
    fn count(n: usize) -> Self {
        <Self as FromPrimitive>::from_usize(n).expect("usize representable as float")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tol_is_identity_for_f64() {
        assert_eq!(<f64 as Scalar>::tol(1e-12), 1e-12);
    }

    #[test]
    fn tol_scales_up_for_f32() {
        let t = <f32 as Scalar>::tol(1e-12);
        assert!(t > 1e-5 && t < 1e-3, "{t}");
    }
}
