//! Harish-Chandra c-function from the Gindikin–Karpelevich product and the
//! Plancherel density `|c(λ)|^{-2}`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::root_data::RootDatum;
use crate::scalar::Real;
use crate::special_gamma::log_gamma;

/// Value of `c(λ)`: finite, or a pole of a numerator gamma factor.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CValue<T> {
    Finite(Complex<T>),
    Infinite,
}

impl<T: Real> CValue<T> {
    pub fn finite(self) -> Option<Complex<T>> {
        match self {
            CValue::Finite(z) => Some(z),
            CValue::Infinite => None,
        }
    }
}

/// `ln c(λ)` before normalization, or why it is not a finite number.
enum LogC<T> {
    Finite(Complex<T>),
    Zero,
    Infinite,
}

#[derive(Clone, Debug)]
pub struct CFunction<T: Real> {
    datum: RootDatum<T>,
    log_c0: Complex<T>,
}

impl<T: Real> CFunction<T> {
    /// Fixes `c0` by `c(−iρ) = 1`.
    pub fn new(datum: RootDatum<T>) -> Result<Self> {
        let minus_i_rho: Vec<Complex<T>> = datum.rho().iter().map(|&r| Complex::new(T::zero(), -r)).collect();
        let log_c0 = match unnormalized(&datum, &minus_i_rho) {
            LogC::Finite(w) => -w,
            _ => {
                return Err(Error::InvalidRootDatum(
                    "c-function has no finite nonzero value at -i rho".into(),
                ))
            }
        };
        Ok(Self { datum, log_c0 })
    }

    pub fn datum(&self) -> &RootDatum<T> {
        &self.datum
    }

    pub fn c0(&self) -> Complex<T> {
        self.log_c0.exp()
    }

    pub fn c_function(&self, lambda: &[Complex<T>]) -> CValue<T> {
        match unnormalized(&self.datum, lambda) {
            LogC::Finite(w) => CValue::Finite((w + self.log_c0).exp()),
            LogC::Zero => CValue::Finite(Complex::new(T::zero(), T::zero())),
            LogC::Infinite => CValue::Infinite,
        }
    }

    /// `|c(λ)|^{-2}` for real `λ`; exactly zero on root hyperplanes.
    pub fn density(&self, lambda: &[T]) -> T {
        let z: Vec<Complex<T>> = lambda.iter().map(|&x| Complex::new(x, T::zero())).collect();
        match unnormalized(&self.datum, &z) {
            LogC::Finite(w) => (-(w.re + self.log_c0.re) * T::lit(2.0)).exp(),
            LogC::Zero => T::infinity(),
            LogC::Infinite => T::zero(),
        }
    }

    /// Order of vanishing of the density at `λ = 0`, which is `2d`.
    pub fn vanishing_order(&self) -> usize {
        2 * self.datum.d()
    }
}

fn unnormalized<T: Real>(datum: &RootDatum<T>, lambda: &[Complex<T>]) -> LogC<T> {
    let ln2 = T::LN_2();
    let mut acc = Complex::new(T::zero(), T::zero());
    let mut zero = false;
    for root in datum.roots() {
        let aa: T = root.vector.iter().map(|&a| a * a).sum();
        let mut z = Complex::new(T::zero(), T::zero());
        for (&l, &a) in lambda.iter().zip(&root.vector) {
            z = z + l * (a / aa);
        }
        // i·z, built componentwise so that conjugate inputs stay conjugate
        let iz = Complex::new(-z.im, z.re);
        let half_m = T::lit(0.5) * T::lit(f64::from(root.m_alpha));
        let m2 = T::lit(f64::from(root.m_2alpha));
        let num = match log_gamma(iz) {
            Ok(v) => v,
            Err(_) => return LogC::Infinite,
        };
        let d1 = log_gamma((iz + (half_m + T::one())) * T::lit(0.5));
        let d2 = log_gamma((iz + (half_m + m2)) * T::lit(0.5));
        match (d1, d2) {
            (Ok(a), Ok(b)) => acc = acc - iz * ln2 + num - a - b,
            _ => zero = true,
        }
    }
    if zero {
        LogC::Zero
    } else {
        LogC::Finite(acc)
    }
}
