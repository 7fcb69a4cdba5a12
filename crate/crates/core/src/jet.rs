//! Truncated Taylor arithmetic.
//!
//! A [`Jet`] stores the normalized Taylor coefficients `f^(k)(x0)/k!` of a
//! function at one point. Products, quotients, elementary functions and
//! composition act on the coefficients exactly, which gives derivatives of
//! products and compositions (Leibniz and Faà di Bruno) without finite
//! differences.

use std::fmt::Debug;
use std::ops::{Div, Mul, Neg};

use num_complex::Complex;
use num_traits::Num;

use crate::scalar::Real;

/// Coefficient field of a jet: the real scalar itself or its complexification.
pub trait JetCoef:
    Copy
    + Num
    + Neg<Output = Self>
    + Mul<<Self as JetCoef>::Real, Output = Self>
    + Div<<Self as JetCoef>::Real, Output = Self>
    + Debug
    + Send
    + Sync
{
    type Real: Real;

    /// Absolute value.
    fn magnitude(&self) -> Self::Real;
}

impl JetCoef for f32 {
    type Real = f32;
    fn magnitude(&self) -> f32 {
        self.abs()
    }
}
impl JetCoef for f64 {
    type Real = f64;
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}
impl<T: Real> JetCoef for Complex<T> {
    type Real = T;
    fn magnitude(&self) -> T {
        self.norm()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Jet<S> {
    coef: Vec<S>,
}

fn factorial<T: Real>(k: usize) -> T {
    (1..=k).fold(T::one(), |acc, j| acc * T::from_usize_lossy(j))
}

impl<S> Jet<S> {
    /// Highest derivative order carried.
    pub fn order(&self) -> usize {
        self.coef.len() - 1
    }

    pub fn coefficients(&self) -> &[S] {
        &self.coef
    }
}

impl<S: Copy> Jet<S> {
    pub fn value(&self) -> S {
        self.coef[0]
    }
}

impl<S> Jet<S> {
    pub fn from_coefficients(coef: Vec<S>) -> Self {
        assert!(!coef.is_empty(), "jet needs at least one coefficient");
        Self { coef }
    }
}

impl<S: JetCoef> Jet<S> {
    pub fn constant(v: S, order: usize) -> Self {
        let mut coef = vec![S::zero(); order + 1];
        coef[0] = v;
        Self { coef }
    }

    /// Builds a jet from plain derivatives `f, f', f'', ...`.
    pub fn from_derivatives(d: &[S]) -> Self {
        let coef = d
            .iter()
            .enumerate()
            .map(|(k, &v)| v / factorial::<S::Real>(k))
            .collect();
        Self::from_coefficients(coef)
    }

    /// The `k`-th derivative at the expansion point.
    pub fn derivative(&self, k: usize) -> S {
        self.coef[k] * factorial::<S::Real>(k)
    }

    pub fn derivatives(&self) -> Vec<S> {
        (0..self.coef.len()).map(|k| self.derivative(k)).collect()
    }

    fn zip_with(&self, other: &Self, op: impl Fn(S, S) -> S) -> Self {
        let n = self.coef.len().min(other.coef.len());
        Self {
            coef: (0..n).map(|k| op(self.coef[k], other.coef[k])).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, s: S) -> Self {
        Self {
            coef: self.coef.iter().map(|&c| c * s).collect(),
        }
    }

    pub fn scale_real(&self, s: S::Real) -> Self {
        Self {
            coef: self.coef.iter().map(|&c| c * s).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.coef.len().min(other.coef.len());
        let coef = (0..n)
            .map(|k| {
                (0..=k).fold(S::zero(), |acc, j| acc + self.coef[j] * other.coef[k - j])
            })
            .collect();
        Self { coef }
    }

    /// Multiplies by a real-valued jet.
    pub fn mul_real(&self, other: &Jet<S::Real>) -> Self {
        let n = self.coef.len().min(other.coef.len());
        let coef = (0..n)
            .map(|k| {
                (0..=k).fold(S::zero(), |acc, j| acc + self.coef[j] * other.coef[k - j])
            })
            .collect();
        Self { coef }
    }

    pub fn div(&self, other: &Self) -> Self {
        let n = self.coef.len().min(other.coef.len());
        let g0 = other.coef[0];
        let mut h: Vec<S> = Vec::with_capacity(n);
        for k in 0..n {
            let mut acc = self.coef[k];
            for j in 1..=k {
                acc = acc - other.coef[j] * h[k - j];
            }
            h.push(acc / g0);
        }
        Self { coef: h }
    }

    /// Treats `self` as the Taylor expansion of an outer function at
    /// `inner.value()` and returns the jet of `outer ∘ inner`.
    pub fn compose(&self, inner: &Jet<S::Real>) -> Self {
        let n = self.coef.len().min(inner.coef.len());
        let mut delta = inner.coef[..n].to_vec();
        delta[0] = <S::Real as num_traits::Zero>::zero();
        let mut out = vec![S::zero(); n];
        // power = delta^m, starting at m = 0
        let mut power = vec![<S::Real as num_traits::Zero>::zero(); n];
        power[0] = <S::Real as num_traits::One>::one();
        for m in 0..n {
            for k in 0..n {
                out[k] = out[k] + self.coef[m] * power[k];
            }
            let mut next = vec![<S::Real as num_traits::Zero>::zero(); n];
            for k in 0..n {
                for j in 1..=k {
                    next[k] = next[k] + delta[j] * power[k - j];
                }
            }
            power = next;
        }
        Self { coef: out }
    }
}

impl<T: Real> Jet<T> {
    /// The identity function expanded at `x0`.
    pub fn variable(x0: T, order: usize) -> Self {
        let mut coef = vec![T::zero(); order + 1];
        coef[0] = x0;
        if order > 0 {
            coef[1] = T::one();
        }
        Self { coef }
    }

    pub fn to_complex(&self) -> Jet<Complex<T>> {
        Jet {
            coef: self.coef.iter().map(|&c| Complex::new(c, T::zero())).collect(),
        }
    }

    pub fn exp(&self) -> Self {
        let n = self.coef.len();
        let mut g = Vec::with_capacity(n);
        g.push(self.coef[0].exp());
        for k in 1..n {
            let mut acc = T::zero();
            for j in 1..=k {
                acc = acc + T::from_usize_lossy(j) * self.coef[j] * g[k - j];
            }
            g.push(acc / T::from_usize_lossy(k));
        }
        Self { coef: g }
    }

    pub fn ln(&self) -> Self {
        let n = self.coef.len();
        let f0 = self.coef[0];
        let mut g = Vec::with_capacity(n);
        g.push(f0.ln());
        for k in 1..n {
            let mut acc = T::from_usize_lossy(k) * self.coef[k];
            for j in 1..k {
                acc = acc - T::from_usize_lossy(j) * g[j] * self.coef[k - j];
            }
            g.push(acc / (T::from_usize_lossy(k) * f0));
        }
        Self { coef: g }
    }

    /// `self^a` for a positive leading value.
    pub fn powf(&self, a: T) -> Self {
        let n = self.coef.len();
        let f0 = self.coef[0];
        let mut g = Vec::with_capacity(n);
        g.push(f0.powf(a));
        for k in 1..n {
            let mut acc = T::zero();
            for j in 1..=k {
                acc = acc + a * T::from_usize_lossy(j) * self.coef[j] * g[k - j];
            }
            for j in 1..k {
                acc = acc - T::from_usize_lossy(j) * g[j] * self.coef[k - j];
            }
            g.push(acc / (T::from_usize_lossy(k) * f0));
        }
        Self { coef: g }
    }

    pub fn recip(&self) -> Self {
        Jet::constant(T::one(), self.order()).div(self)
    }

    /// `(sin f, cos f)`.
    pub fn sin_cos(&self) -> (Self, Self) {
        let n = self.coef.len();
        let (s0, c0) = self.coef[0].sin_cos();
        let mut s = Vec::with_capacity(n);
        let mut c = Vec::with_capacity(n);
        s.push(s0);
        c.push(c0);
        for k in 1..n {
            let mut sa = T::zero();
            let mut ca = T::zero();
            for j in 1..=k {
                let jf = T::from_usize_lossy(j) * self.coef[j];
                sa = sa + jf * c[k - j];
                ca = ca - jf * s[k - j];
            }
            let kf = T::from_usize_lossy(k);
            s.push(sa / kf);
            c.push(ca / kf);
        }
        (Self { coef: s }, Self { coef: c })
    }

    /// Antiderivative with value `c0` at the expansion point, one order higher
    /// than `self`.
    pub fn integrate(&self, c0: T) -> Self {
        let mut coef = Vec::with_capacity(self.coef.len() + 1);
        coef.push(c0);
        for (k, &c) in self.coef.iter().enumerate() {
            coef.push(c / T::from_usize_lossy(k + 1));
        }
        Self { coef }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn product_rule_matches_closed_form() {
        // (x^2 sin x)'' at x = 0.7
        let x = Jet::variable(0.7_f64, 4);
        let (s, _) = x.sin_cos();
        let f = x.mul(&x).mul(&s);
        let x0: f64 = 0.7;
        let expected = 2.0 * x0.sin() + 4.0 * x0 * x0.cos() - x0 * x0 * x0.sin();
        assert_relative_eq!(f.derivative(2), expected, max_relative = 1e-14);
    }

    #[test]
    fn exp_ln_powf_are_consistent() {
        let x = Jet::variable(1.3_f64, 8);
        let via_exp = x.ln().scale_real(-2.5).exp();
        let via_pow = x.powf(-2.5);
        for k in 0..=8 {
            assert_relative_eq!(
                via_exp.derivative(k),
                via_pow.derivative(k),
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn composition_is_chain_rule() {
        // exp(sin x): derivative cos(x) e^{sin x}
        let x = Jet::variable(0.4_f64, 5);
        let (s, _) = x.sin_cos();
        let direct = s.exp();
        let outer = Jet::variable(s.value(), 5).exp();
        let composed = outer.compose(&s);
        for k in 0..=5 {
            assert_relative_eq!(direct.derivative(k), composed.derivative(k), max_relative = 1e-13);
        }
        assert_relative_eq!(
            direct.derivative(1),
            0.4_f64.cos() * 0.4_f64.sin().exp(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn division_inverts_multiplication() {
        let x = Jet::variable(0.9_f64, 6);
        let a = x.exp();
        let b = x.mul(&x).add(&Jet::constant(1.0, 6));
        let back = a.mul(&b).div(&b);
        for k in 0..=6 {
            assert_relative_eq!(back.coefficients()[k], a.coefficients()[k], max_relative = 1e-13);
        }
    }
}
