//! Decay profiles `ψ` with exact derivatives and the integral constants
//! `C(ψ, k, s) = ∫_0^∞ |ψ^{(k)}(r)| (1+r)^s dr`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::quadrature::{adaptive, semi_infinite};
use crate::scalar::Real;

/// Highest derivative order [`Profile::eval`] supports.
pub const MAX_ORDER: usize = 12;

/// Smooth step equal to 1 on `(-∞, start]` and 0 on `[end, ∞)`, built from
/// `h(s) = σ(s) / (σ(s) + σ(1−s))` with `σ(s) = e^{-1/s}` for `s > 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mollifier<T> {
    pub start: T,
    pub end: T,
}

impl<T: Real> Mollifier<T> {
    pub fn new(start: T, end: T) -> Self {
        assert!(start < end, "mollifier needs start < end");
        Self { start, end }
    }

    pub fn value(&self, x: T) -> T {
        self.jet(x, 0).value()
    }

    /// Derivatives up to `order` at `x`.
    pub fn jet(&self, x: T, order: usize) -> Jet<T> {
        if x <= self.start {
            return Jet::constant(T::one(), order);
        }
        if x >= self.end {
            return Jet::constant(T::zero(), order);
        }
        let width = self.end - self.start;
        let s = Jet::variable(x - self.start, order).scale_real(width.recip());
        let one = Jet::constant(T::one(), order);
        let sigma = |u: &Jet<T>| u.recip().scale_real(-T::one()).exp();
        let a = sigma(&s);
        let b = sigma(&one.sub(&s));
        one.sub(&a.div(&a.add(&b)))
    }
}

/// Decay profile family.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Profile<T> {
    /// `e^{-βr}`
    Exponential { beta: T },
    /// `(1 + r²)^{-β/2}`
    Rational { beta: T },
    /// 1 on `[0, R₀]`, 0 on `[2R₀, ∞)`.
    Bump { r0: T },
    /// `ψ ≡ 0`.
    Zero,
}

impl<T: Real> Profile<T> {
    pub fn exponential(beta: T) -> Result<Self> {
        positive("beta", beta)?;
        Ok(Profile::Exponential { beta })
    }

    pub fn rational(beta: T) -> Result<Self> {
        positive("beta", beta)?;
        Ok(Profile::Rational { beta })
    }

    pub fn bump(r0: T) -> Result<Self> {
        positive("R0", r0)?;
        Ok(Profile::Bump { r0 })
    }

    /// `ψ^{(k)}(r)` for `k ≤ 12`.
    pub fn eval(&self, k: usize, r: T) -> Result<T> {
        if k > MAX_ORDER {
            return Err(Error::UnsupportedOrder { order: k, max: MAX_ORDER });
        }
        Ok(self.jet(r, k).derivative(k))
    }

    pub fn value(&self, r: T) -> T {
        match *self {
            Profile::Exponential { beta } => (-beta * r).exp(),
            Profile::Rational { beta } => (T::one() + r * r).powf(-beta * T::lit(0.5)),
            Profile::Bump { r0 } => Mollifier::new(r0, r0 + r0).value(r),
            Profile::Zero => T::zero(),
        }
    }

    /// Derivatives `ψ(r), ..., ψ^{(order)}(r)` as a jet.
    pub fn jet(&self, r: T, order: usize) -> Jet<T> {
        match *self {
            Profile::Exponential { beta } => {
                let e = (-beta * r).exp();
                let mut d = Vec::with_capacity(order + 1);
                let mut f = e;
                for _ in 0..=order {
                    d.push(f);
                    f = f * (-beta);
                }
                Jet::from_derivatives(&d)
            }
            Profile::Rational { beta } => {
                let x = Jet::variable(r, order);
                x.mul(&x)
                    .add(&Jet::constant(T::one(), order))
                    .powf(-beta * T::lit(0.5))
            }
            Profile::Bump { r0 } => Mollifier::new(r0, r0 + r0).jet(r, order),
            Profile::Zero => Jet::constant(T::zero(), order),
        }
    }

    /// `C(ψ, k, s)` to relative tolerance `1e-9`.
    pub fn constant_c(&self, k: usize, s: T) -> Result<T> {
        if k > MAX_ORDER {
            return Err(Error::UnsupportedOrder { order: k, max: MAX_ORDER });
        }
        let divergent = Error::Divergent { k, s: s.as_f64() };
        let integrand = |r: T| self.jet(r, k).derivative(k).abs() * (T::one() + r).powf(s);
        let rel = T::lit(1e-10);
        let result = match *self {
            Profile::Rational { beta } => {
                if s - beta - T::from_usize_lossy(k) >= -T::one() {
                    return Err(divergent);
                }
                let head = adaptive(integrand, T::zero(), T::one(), rel, T::zero(), 4000);
                let tail = semi_infinite(integrand, T::one(), rel, T::zero(), 4000);
                (head.value + tail.value, head.converged && tail.converged)
            }
            Profile::Bump { r0 } => {
                if k == 0 {
                    let plateau = adaptive(integrand, T::zero(), r0, rel, T::zero(), 4000);
                    let ramp = adaptive(integrand, r0, r0 + r0, rel, T::zero(), 4000);
                    (plateau.value + ramp.value, plateau.converged && ramp.converged)
                } else {
                    let ramp = adaptive(integrand, r0, r0 + r0, rel, T::zero(), 4000);
                    (ramp.value, ramp.converged)
                }
            }
            Profile::Exponential { .. } => {
                let r = semi_infinite(integrand, T::zero(), rel, T::zero(), 4000);
                (r.value, r.converged)
            }
            Profile::Zero => (T::zero(), true),
        };
        if !result.1 || !result.0.is_finite() {
            return Err(divergent);
        }
        Ok(result.0)
    }

    /// A radius beyond which `|ψ(r)|(1+r)^s < tol`; the profile is treated as
    /// zero there.
    pub fn truncation_radius(&self, tol: T, s: T) -> T {
        match *self {
            Profile::Bump { r0 } => r0 + r0,
            Profile::Zero => T::zero(),
            _ => {
                let mut r = T::one();
                while self.value(r).abs() * (T::one() + r).powf(s) >= tol && r < T::lit(1e12) {
                    r = r + r;
                }
                // refine by bisection between r/2 and r
                let mut lo = r * T::lit(0.5);
                let mut hi = r;
                for _ in 0..60 {
                    let mid = (lo + hi) * T::lit(0.5);
                    if self.value(mid).abs() * (T::one() + mid).powf(s) >= tol {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                hi
            }
        }
    }
}

fn positive<T: Real>(name: &str, v: T) -> Result<()> {
    if v > T::zero() && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{name} must be positive, got {v}")))
    }
}

impl<T: Real> fmt::Display for Profile<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Profile::Exponential { beta } => write!(f, "exp:{beta}"),
            Profile::Rational { beta } => write!(f, "rational:{beta}"),
            Profile::Bump { r0 } => write!(f, "bump:{r0}"),
            Profile::Zero => write!(f, "zero"),
        }
    }
}

impl<T: Real> FromStr for Profile<T> {
    type Err = Error;

    /// `exp:β`, `rational:β`, `bump:R₀` or `zero`.
    fn from_str(s: &str) -> Result<Self> {
        if s.trim() == "zero" {
            return Ok(Profile::Zero);
        }
        let (family, param) = s
            .split_once(':')
            .ok_or_else(|| Error::InvalidArgument(format!("profile `{s}` is not of the form family:value")))?;
        let v: f64 = param
            .trim()
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("profile parameter `{param}` is not a number")))?;
        let v = T::from_f64(v).ok_or_else(|| Error::InvalidArgument(format!("profile parameter {v}")))?;
        match family.trim() {
            "exp" | "exponential" => Self::exponential(v),
            "rational" => Self::rational(v),
            "bump" => Self::bump(v),
            other => Err(Error::InvalidArgument(format!(
                "unknown profile family `{other}`; expected exp, rational or bump"
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn spot_values() {
        let e = Profile::exponential(1.0_f64).unwrap();
        assert_relative_eq!(e.eval(2, 0.0).unwrap(), 1.0);
        let r = Profile::rational(4.0_f64).unwrap();
        assert_relative_eq!(r.eval(0, 1.0).unwrap(), 0.25, max_relative = 1e-15);
        let b = Profile::bump(2.0_f64).unwrap();
        assert_eq!(b.eval(0, 1.0).unwrap(), 1.0);
        assert_eq!(b.eval(0, 4.5).unwrap(), 0.0);
        assert!(matches!(b.eval(13, 1.0), Err(Error::UnsupportedOrder { .. })));
    }

    #[test]
    fn constants() {
        let e = Profile::exponential(1.0_f64).unwrap();
        assert_relative_eq!(e.constant_c(0, 0.0).unwrap(), 1.0, max_relative = 1e-9);
        assert_relative_eq!(e.constant_c(0, 1.0).unwrap(), 2.0, max_relative = 1e-9);
        let r = Profile::rational(2.0_f64).unwrap();
        assert!(matches!(r.constant_c(0, 2.0), Err(Error::Divergent { k: 0, .. })));
        // ∫ (1+r²)^{-1} dr = π/2
        assert_relative_eq!(r.constant_c(0, 0.0).unwrap(), std::f64::consts::FRAC_PI_2, max_relative = 1e-9);
    }

    #[test]
    fn bump_ramp_integrates_to_one() {
        // ∫ |ψ'| over the monotone ramp is ψ(R₀) − ψ(2R₀) = 1
        let b = Profile::bump(1.5_f64).unwrap();
        assert_relative_eq!(b.constant_c(1, 0.0).unwrap(), 1.0, max_relative = 1e-9);
    }

    #[test]
    fn mollifier_is_symmetric_step() {
        let m = Mollifier::new(0.0_f64, 1.0);
        assert_relative_eq!(m.value(0.5), 0.5, max_relative = 1e-15);
        assert_relative_eq!(m.value(0.2) + m.value(0.8), 1.0, max_relative = 1e-14);
    }

    #[test]
    fn parse_round_trip() {
        for s in ["exp:1", "rational:6", "bump:2"] {
            let p: Profile<f64> = s.parse().unwrap();
            assert_eq!(p.to_string(), s);
        }
        assert!("gauss:1".parse::<Profile<f64>>().is_err());
        assert!("exp:-1".parse::<Profile<f64>>().is_err());
    }
}
