use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating-point scalar accepted by every computation in the crate.
pub trait Real: Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static {
    /// Converts an `f64` literal into the scalar type.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// Converts an integer index into the scalar type.
    fn int(n: i64) -> Self {
        Self::from_i64(n).expect("integer representable")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// `(-1)^n` as a scalar.
pub fn parity<T: Real>(n: i64) -> T {
    if n.rem_euclid(2) == 0 {
        T::one()
    } else {
        -T::one()
    }
}
