use num_traits::{Float, FromPrimitive, NumAssign};

/// Scalar trait for all soft-valued arithmetic in this crate.
///
/// LLR vectors, channel samples, damping factors, and soft weights are
/// parameterized over `FloatT`, with implementations provided for `f32` and
/// `f64`. Gaussian noise is always sampled in `f64` and converted, so the
/// seed-to-noise mapping is identical across scalar types.
pub trait FloatT:
    'static
    + Float
    + FromPrimitive
    + NumAssign
    + std::iter::Sum
    + std::fmt::Debug
    + std::fmt::Display
    + Send
    + Sync
{
    fn as_f64(self) -> f64;
}

impl FloatT for f32 {
    fn as_f64(self) -> f64 {
        self as f64
    }
}

impl FloatT for f64 {
    fn as_f64(self) -> f64 {
        self
    }
}
