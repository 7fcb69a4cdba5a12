//! The floating-point scalar every numeric routine is generic over.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive};

use crate::jet::JetCoef;

/// Real scalar type: `f32` or `f64`.
///
/// Tolerances quoted throughout the crate are for `f64`; `f32` instantiations
/// run the same algorithms at single precision.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + Debug
    + Display
    + LowerExp
    + Sum
    + Send
    + Sync
    + 'static
    + JetCoef<Real = Self>
{
    /// Converts an `f64` literal into `Self`.
    #[inline]
    fn lit(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).expect("f64 literal representable")
    }

    /// Converts a count or index.
    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        <Self as FromPrimitive>::from_usize(n).expect("usize representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// `e^{i·theta}`.
#[inline]
pub fn cis<T: Real>(theta: T) -> Complex<T> {
    Complex::new(theta.cos(), theta.sin())
}

/// Neumaier-compensated accumulator for complex sums.
#[derive(Clone, Copy, Debug)]
pub struct ComplexSum<T> {
    sum: Complex<T>,
    comp: Complex<T>,
}

impl<T: Real> Default for ComplexSum<T> {
    fn default() -> Self {
        Self {
            sum: Complex::new(T::zero(), T::zero()),
            comp: Complex::new(T::zero(), T::zero()),
        }
    }
}

impl<T: Real> ComplexSum<T> {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, z: Complex<T>) {
        let (re, cre) = two_sum(self.sum.re, z.re);
        let (im, cim) = two_sum(self.sum.im, z.im);
        self.sum = Complex::new(re, im);
        self.comp = self.comp + Complex::new(cre, cim);
    }

    pub fn value(&self) -> Complex<T> {
        self.sum + self.comp
    }
}

#[inline]
fn two_sum<T: Real>(a: T, b: T) -> (T, T) {
    let s = a + b;
    let c = if a.abs() >= b.abs() { (a - s) + b } else { (b - s) + a };
    (s, c)
}
