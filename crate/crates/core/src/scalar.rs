use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive};
use std::fmt::{Debug, Display};
use std::iter::Sum;

/// Floating point type the library is generic over (f32 or f64).
///
/// Every acceptance tolerance assumes f64; f32 works but only to single
/// precision.
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + Sum + Send + Sync + 'static
{
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal fits the scalar type")
    }

    #[inline]
    fn from_int(n: i64) -> Self {
        Self::from_i64(n).expect("integer fits the scalar type")
    }
}

impl Real for f32 {}
impl Real for f64 {}

pub type Cx<T> = Complex<T>;

#[inline]
pub(crate) fn cx<T: Real>(re: T, im: T) -> Cx<T> {
    Complex::new(re, im)
}
