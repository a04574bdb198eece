//! Scalar abstraction for the numeric kernels that run in more than one
//! arithmetic: `f64` (and `f32`) for production, `BigRational` as the exact
//! pivot mode of the simplex and the envelope oracle.

use num_rational::BigRational;
use num_traits::{Num, Signed, ToPrimitive};

pub trait Scalar: Num + Signed + PartialOrd + Clone + std::fmt::Debug {
    /// Slack used for pivot and degeneracy decisions. Zero for exact types.
    fn pivot_tol() -> Self;

    /// Embed an `f64`. Exact for rational scalars (every finite float is
    /// rational); the identity for floats.
    fn from_f64(x: f64) -> Self;

    fn to_f64(&self) -> f64;
}

impl Scalar for f64 {
    fn pivot_tol() -> Self {
        1e-9
    }
    fn from_f64(x: f64) -> Self {
        x
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for f32 {
    fn pivot_tol() -> Self {
        1e-4
    }
    fn from_f64(x: f64) -> Self {
        x as f32
    }
    fn to_f64(&self) -> f64 {
        f64::from(*self)
    }
}

impl Scalar for BigRational {
    fn pivot_tol() -> Self {
        num_traits::Zero::zero()
    }
    fn from_f64(x: f64) -> Self {
        BigRational::from_float(x).expect("finite float")
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}
