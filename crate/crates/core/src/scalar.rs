//! Scalar abstraction for the closed-form level-sequence and order-statistic
//! mathematics.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real scalar used by the analytic formulas: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static
{
    /// Lossy conversion from an `f64` literal.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// Conversion from a count.
    fn count(x: usize) -> Self {
        Self::from_usize(x).expect("count representable")
    }
}

impl Real for f32 {}
impl Real for f64 {}
