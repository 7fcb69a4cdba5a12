//! Chebyshev interpolants on an interval, with spectral differentiation.

use crate::jet::{Jet, JetCoef};
use crate::scalar::Real;

/// Interpolant `Σ c_k T_k(s)` with `s` the affine image of `[lo, hi]` on `[-1, 1]`.
#[derive(Clone, Debug)]
pub struct Chebyshev<S: JetCoef> {
    lo: S::Real,
    hi: S::Real,
    coef: Vec<S>,
}

/// The `degree + 1` first-kind Chebyshev points mapped to `[lo, hi]`, in
/// decreasing order. None of them is an endpoint.
pub fn nodes<T: Real>(lo: T, hi: T, degree: usize) -> Vec<T> {
    let m = degree + 1;
    let mid = (lo + hi) * T::lit(0.5);
    let half = (hi - lo) * T::lit(0.5);
    (0..m)
        .map(|j| {
            let theta = T::PI() * (T::from_usize_lossy(2 * j + 1)) / T::from_usize_lossy(2 * m);
            mid + half * theta.cos()
        })
        .collect()
}

impl<S: JetCoef> Chebyshev<S> {
    /// Interpolates `f` at the first-kind points of [`nodes`].
    pub fn fit<F: FnMut(S::Real) -> S>(lo: S::Real, hi: S::Real, degree: usize, mut f: F) -> Self {
        let values: Vec<S> = nodes(lo, hi, degree).into_iter().map(&mut f).collect();
        Self::from_values(lo, hi, &values)
    }

    /// Interpolant through `values` given at the points of [`nodes`].
    pub fn from_values(lo: S::Real, hi: S::Real, values: &[S]) -> Self {
        let m = values.len();
        assert!(m >= 1, "at least one sample required");
        let period = 4 * m;
        // cos(π k (2j+1) / (2m)) by table lookup on the integer angle index
        let table: Vec<S::Real> = cos_table(m);
        let two_over_m = <S::Real as Real>::lit(2.0) / S::Real::from_usize_lossy(m);
        let mut coef = Vec::with_capacity(m);
        for k in 0..m {
            let mut acc = S::zero();
            for (j, &v) in values.iter().enumerate() {
                acc = acc + v * table[(k * (2 * j + 1)) % period];
            }
            let mut c = acc * two_over_m;
            if k == 0 {
                c = c * <S::Real as Real>::lit(0.5);
            }
            coef.push(c);
        }
        Self { lo, hi, coef }
    }

    /// Drops trailing coefficients below `tol` times the largest one. Noise
    /// coefficients otherwise dominate high-order endpoint derivatives.
    pub fn chop(mut self, tol: S::Real) -> Self {
        let mags: Vec<S::Real> = self.coef.iter().map(|c| c.magnitude()).collect();
        let keep = chop_length(&mags, tol);
        self.coef.truncate(keep);
        self
    }

    pub fn from_coefficients(lo: S::Real, hi: S::Real, coef: Vec<S>) -> Self {
        assert!(!coef.is_empty());
        Self { lo, hi, coef }
    }

    pub fn coefficients(&self) -> &[S] {
        &self.coef
    }

    pub fn degree(&self) -> usize {
        self.coef.len() - 1
    }

    pub fn domain(&self) -> (S::Real, S::Real) {
        (self.lo, self.hi)
    }

    fn to_unit(&self, x: S::Real) -> S::Real {
        let two = <S::Real as Real>::lit(2.0);
        (two * x - self.lo - self.hi) / (self.hi - self.lo)
    }

    /// Clenshaw evaluation; valid for `x` in the domain.
    pub fn eval(&self, x: S::Real) -> S {
        let s = self.to_unit(x);
        let two_s = s + s;
        let mut b1 = S::zero();
        let mut b2 = S::zero();
        for &c in self.coef.iter().skip(1).rev() {
            let b0 = c + b1 * two_s - b2;
            b2 = b1;
            b1 = b0;
        }
        self.coef[0] + b1 * s - b2
    }

    /// Derivative interpolant (with respect to `x`, not the unit variable).
    pub fn derivative(&self) -> Self {
        let n = self.coef.len();
        if n == 1 {
            return Self { lo: self.lo, hi: self.hi, coef: vec![S::zero()] };
        }
        let mut d = vec![S::zero(); n + 1];
        for k in (1..n).rev() {
            d[k - 1] = d[k + 1] + self.coef[k] * (S::Real::from_usize_lossy(2 * k));
        }
        d[0] = d[0] * <S::Real as Real>::lit(0.5);
        d.truncate(n - 1);
        let scale = <S::Real as Real>::lit(2.0) / (self.hi - self.lo);
        Self {
            lo: self.lo,
            hi: self.hi,
            coef: d.into_iter().map(|c| c * scale).collect(),
        }
    }

    /// Derivatives `f(x), f'(x), ..., f^{(order)}(x)` as a jet.
    pub fn jet(&self, x: S::Real, order: usize) -> Jet<S> {
        let mut out = Vec::with_capacity(order + 1);
        let mut current = self.clone();
        for k in 0..=order {
            out.push(current.eval(x));
            if k < order {
                current = current.derivative();
            }
        }
        Jet::from_derivatives(&out)
    }

    /// Largest magnitude among the last `count` coefficients relative to the
    /// largest coefficient overall: a resolution indicator.
    pub fn tail_ratio(&self, count: usize) -> S::Real {
        let mags: Vec<S::Real> = self.coef.iter().map(|c| c.magnitude()).collect();
        tail_ratio_of(&mags, count)
    }
}

fn tail_ratio_of<T: Real>(mags: &[T], count: usize) -> T {
    let max = mags.iter().fold(T::zero(), |a, &b| a.max(b));
    if max == T::zero() {
        return T::zero();
    }
    let start = mags.len().saturating_sub(count);
    mags[start..].iter().fold(T::zero(), |a, &b| a.max(b)) / max
}

fn chop_length<T: Real>(mags: &[T], tol: T) -> usize {
    let max = mags.iter().fold(T::zero(), |a, &b| a.max(b));
    let cut = max * tol;
    mags.iter().rposition(|&m| m > cut).map_or(1, |i| i + 1)
}

fn cos_table<T: Real>(m: usize) -> Vec<T> {
    (0..4 * m)
        .map(|i| (T::PI() * T::from_usize_lossy(i) / T::from_usize_lossy(2 * m)).cos())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use num_complex::Complex;

    #[test]
    fn interpolates_and_differentiates_exp() {
        let c = Chebyshev::fit(0.0_f64, 2.0, 30, |x: f64| (0.5 * x).exp());
        assert!(c.tail_ratio(3) < 1e-15);
        let c = c.chop(1e-15);
        assert!(c.degree() < 20);
        for &x in &[0.0, 0.3, 1.7, 2.0] {
            let j = c.jet(x, 4);
            for k in 0..=4 {
                let expected = 0.5f64.powi(k as i32) * (0.5 * x).exp();
                assert_relative_eq!(j.derivative(k), expected, max_relative = 1e-7);
            }
        }
    }

    #[test]
    fn complex_values_keep_phase() {
        let c = Chebyshev::fit(-1.0_f64, 1.0, 24, |x: f64| Complex::new(x.cos(), x.sin()));
        let d = c.derivative();
        let v = d.eval(0.4);
        assert!((v - Complex::new(-(0.4f64).sin(), 0.4f64.cos())).norm() < 1e-12);
    }

    #[test]
    fn polynomial_is_reproduced_exactly() {
        let c = Chebyshev::fit(1.0_f64, 3.0, 5, |x: f64| x * x * x - 2.0 * x);
        assert!(c.coefficients()[4].abs() < 1e-14);
        assert_relative_eq!(c.derivative().derivative().eval(2.5), 15.0, max_relative = 1e-12);
    }
}
