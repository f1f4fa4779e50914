//! Scalar abstraction shared by every numerical routine in the crate.
//!
//! All kernels are written against [`Real`] and instantiated for `f32` and
//! `f64`. Thresholds are stated in `f64` and converted with [`Real::lit`];
//! the documented tolerances assume `f64`.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Real floating-point scalar: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + rustfft::FftNum
    + 'static
{
    /// Converts an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// Lossy conversion to `f64`, used for reporting.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex scalar over a [`Real`].
pub type C<T> = Complex<T>;

#[inline]
pub(crate) fn creal<T: Real>(re: T) -> C<T> {
    Complex::new(re, T::zero())
}

/// Complex value of any precision from `f64` parts.
#[inline]
pub fn cx<T: Real>(re: f64, im: f64) -> C<T> {
    Complex::new(T::lit(re), T::lit(im))
}

/// Double-precision complex value.
#[inline]
pub fn c64(re: f64, im: f64) -> C<f64> {
    Complex::new(re, im)
}

#[inline]
pub(crate) fn is_finite_c<T: Real>(z: C<T>) -> bool {
    z.re.is_finite() && z.im.is_finite()
}
