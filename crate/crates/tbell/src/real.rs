//! Scalar abstraction for the floating-point side of the pipeline.
//!
//! Event timestamps are exact integer milliseconds throughout; floating point
//! enters only where correlation sums get divided and where distribution
//! functions are evaluated. Everything downstream of that division is generic
//! over [`Real`], so the statistics layer runs in `f32` or `f64` unchanged.
//! The crate root exports `f64` aliases for the common case.

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point scalar used for correlations, D values, and test statistics.
pub trait Real:
    Float
    + FromPrimitive
    + ToPrimitive
    + core::iter::Sum<Self>
    + core::fmt::Debug
    + core::fmt::Display
    + Send
    + Sync
    + 'static
{
    /// Complementary error function, the one special function the normal CDF needs.
    fn erfc(self) -> Self;

    fn from_int(v: i64) -> Self {
        Self::from_i64(v).expect("i64 value representable as Real")
    }

    fn from_count(v: usize) -> Self {
        Self::from_usize(v).expect("count representable as Real")
    }

    /// Conversion for `f64` literals (tolerances, series cutoffs).
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal representable as Real")
    }
}

impl Real for f32 {
    fn erfc(self) -> Self {
        libm::erfcf(self)
    }
}

impl Real for f64 {
    fn erfc(self) -> Self {
        libm::erfc(self)
    }
}
