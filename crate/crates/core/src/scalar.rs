//! Scalar abstraction shared by every module.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Real floating-point type the simulator can run on (`f32` or `f64`).
///
/// The tolerance hooks scale the contract thresholds to the precision of the
/// type; for `f64` they are the pinned values used throughout the crate.
pub trait Real:
    Float + FloatConst + FromPrimitive + NumAssign + Sum + Default + Debug + Display + Send + Sync + 'static
{
    /// Construction-time validation tolerance (Hermiticity, trace, unitarity).
    fn validation_tol() -> Self;
    /// Tolerance for derived equalities (channel identities, backends agreeing).
    fn equality_tol() -> Self;
    /// Allowed negative eigenvalue for positive-semidefinite checks.
    fn psd_tol() -> Self;

    /// Literal conversion; every `f64` literal used in the crate is representable.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal out of range")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    fn validation_tol() -> Self {
        1e-12
    }
    fn equality_tol() -> Self {
        1e-10
    }
    fn psd_tol() -> Self {
        1e-10
    }
}

impl Real for f32 {
    fn validation_tol() -> Self {
        1e-5
    }
    fn equality_tol() -> Self {
        1e-4
    }
    fn psd_tol() -> Self {
        1e-4
    }
}

/// Complex scalar over a [`Real`] base type.
pub type Cplx<T> = Complex<T>;

#[inline]
pub(crate) fn c<T: Real>(re: f64, im: f64) -> Complex<T> {
    Complex::new(T::lit(re), T::lit(im))
}

#[inline]
pub(crate) fn cr<T: Real>(re: T) -> Complex<T> {
    Complex::new(re, T::zero())
}
