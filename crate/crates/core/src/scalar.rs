//! Real scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating point field underlying all amplitudes: `f32` or `f64`.
pub trait Real: Float + FloatConst + FromPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static {
    /// Converts an `f64` literal into this scalar type.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite scalar")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex amplitude over a [`Real`] field.
pub type C<T> = Complex<T>;

#[inline]
pub fn c<T: Real>(re: T, im: T) -> C<T> {
    Complex::new(re, im)
}

#[inline]
pub fn cr<T: Real>(re: f64) -> C<T> {
    Complex::new(T::lit(re), T::zero())
}

#[inline]
pub fn czero<T: Real>() -> C<T> {
    Complex::new(T::zero(), T::zero())
}

#[inline]
pub fn cone<T: Real>() -> C<T> {
    Complex::new(T::one(), T::zero())
}

/// Unit-modulus phase `e^{iθ}`.
#[inline]
pub fn cis<T: Real>(theta: T) -> C<T> {
    Complex::new(theta.cos(), theta.sin())
}

#[inline]
pub fn is_finite<T: Real>(z: C<T>) -> bool {
    z.re.is_finite() && z.im.is_finite()
}
