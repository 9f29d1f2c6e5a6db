//! Scalar abstraction for the floating-point parts of the crate.
//!
//! Everything that is pure real/complex analysis (amplitudes, characters,
//! quadrature, Farey arcs) is written against [`Real`], so it runs in `f32`
//! for quick sweeps and in `f64` for the verification batteries. The exact
//! integer machinery and the double-double phase reduction are not generic.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Lossy conversion from `f64`, used for literal constants.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("float literal representable")
    }

    #[inline]
    fn from_u64_lossy(n: u64) -> Self {
        Self::from_u64(n).expect("integer representable")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// `e(x) = exp(2 pi i x)`, with the argument reduced mod 1 first.
#[inline]
pub fn e<F: Real>(x: F) -> Complex<F> {
    let r = x - x.round();
    Complex::from_polar(F::one(), F::TAU() * r)
}

/// `e(num / den)` for integers, reduced exactly before going to floating point.
#[inline]
pub fn e_ratio<F: Real>(num: i64, den: u64) -> Complex<F> {
    debug_assert!(den > 0);
    let r = num.rem_euclid(den as i64) as u64;
    e(F::from_u64_lossy(r) / F::from_u64_lossy(den))
}
