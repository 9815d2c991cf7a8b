//! Scalar abstractions shared by the exact and floating-point parts of the crate.
//!
//! Polynomials are generic over a commutative ring, Smith normal forms over a
//! Euclidean integer type, and the KP evaluation over a real float type. The
//! crate root fixes the concrete choices (`BigInt`, `f64`) as type aliases.

use std::fmt::{Debug, Display};

use num_integer::Integer;
use num_traits::{Float, FromPrimitive, Num, Signed, ToPrimitive};

/// Coefficient ring for [`crate::poly::Poly`].
///
/// Division is only used for exact quotients; implementations with truncating
/// division (integers) are checked by multiplying back.
pub trait Ring: Num + Clone + Debug + PartialEq + std::ops::Neg<Output = Self> {}

impl<T> Ring for T where T: Num + Clone + Debug + PartialEq + std::ops::Neg<Output = Self> {}

/// Integer type used by the Smith normal form.
pub trait IntegerScalar: Integer + Signed + Clone + Debug + Display + FromPrimitive + ToPrimitive {}

impl<T> IntegerScalar for T where T: Integer + Signed + Clone + Debug + Display + FromPrimitive + ToPrimitive {}

/// Real type used by the τ-function evaluation.
pub trait Real: Float + FromPrimitive + Debug + Display + Send + Sync + 'static {
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in float type")
    }
}

impl Real for f32 {}
impl Real for f64 {}
