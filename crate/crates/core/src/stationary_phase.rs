//! Endpoint stationary phase with exact remainders.
//!
//! For `I(x) = ∫_a^b g(t) e^{ixf(t)} dt` with `f` increasing and
//! `f(t) − f(a) ~ (t−a)^p`, the substitution `u^p = f(t) − f(a)` gives
//! `I(x) = e^{ixf(a)} [I₁(x) − I₂(x)]` where `I₁` integrates over `[0, ∞)` and
//! `I₂` over `[B, ∞)`. Both are expanded by parts; [`k_n`] are the contour
//! antiderivatives used at `u = 0`. Every piece of the expansion is computed
//! from the same Chebyshev model of `q`, so the decomposition reproduces the
//! integral to quadrature accuracy for any truncation orders.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex;

use crate::chebyshev::Chebyshev;
use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::profiles::Mollifier;
use crate::quadrature::{uniform_breaks, GaussLegendre};
use crate::scalar::{cis, ComplexSum, Real};
use crate::special_gamma::gamma_real;

/// Default degree of the Chebyshev model of `q`.
pub const DEFAULT_DEGREE: usize = 64;

/// Relative accuracy the direct quadrature aims for.
pub const ORACLE_TOLERANCE: f64 = 1e-9;

/// Relative magnitude at which the `k_n` ray integrand is cut.
const RAY_CUTOFF: f64 = 1e-18;

fn factorial<T: Real>(n: usize) -> T {
    (1..=n).fold(T::one(), |acc, k| acc * T::from_usize_lossy(k))
}

/// `k_n(u) = ((−1)^n/(n−1)!) ∫ (z−u)^{n−1} e^{ixz^p} dz` over the ray
/// `arg(z − u) = π/(2p)`.
pub fn k_n<T: Real>(n: usize, u: T, x: T, p: u32) -> Complex<T> {
    assert!(n >= 1, "k_n is defined for n >= 1");
    let pf = T::lit(f64::from(p));
    let angle = T::PI() / (T::lit(2.0) * pf);
    let omega = cis(angle);
    let nm1 = T::from_usize_lossy(n - 1);
    let z_pow = |zeta: T| {
        let z = Complex::new(u, T::zero()) + omega * zeta;
        z.powi(p as i32)
    };
    // log-magnitude of the integrand; unimodal in ζ
    let log_mag = |zeta: T| {
        let decay = x * z_pow(zeta).im;
        if n == 1 {
            -decay
        } else {
            nm1 * zeta.ln() - decay
        }
    };
    let scale = {
        let gauss = x.powf(-pf.recip());
        if u > T::zero() {
            let linear = (x * pf * u.powi(p as i32 - 1) * angle.sin()).recip();
            gauss.min(linear)
        } else {
            gauss
        }
    };
    let ln_cut = T::lit(RAY_CUTOFF).ln();
    let growth = T::lit(2.0).powf(T::lit(0.25));
    let mut zeta = scale * T::lit(1e-3);
    let mut peak = log_mag(zeta);
    let mut last = peak;
    let mut steps = 0;
    loop {
        zeta = zeta * growth;
        let m = log_mag(zeta);
        if m > peak {
            peak = m;
        }
        if m < last && m < peak + ln_cut {
            break;
        }
        last = m;
        steps += 1;
        if steps > 2000 {
            break;
        }
    }
    let end = zeta;
    let phase_span = (x * (z_pow(end).re - u.powi(p as i32))).abs();
    let decay_span = x * z_pow(end).im;
    let panels = ((phase_span + decay_span) / T::lit(2.0))
        .ceil()
        .to_usize()
        .unwrap_or(1)
        .clamp(4, 4000);
    let rule = ray_rule::<T>();
    let breaks = uniform_breaks(T::zero(), end, panels);
    let integral = rule.integrate_panels(&breaks, |zeta| {
        let z = Complex::new(u, T::zero()) + omega * zeta;
        let e = (Complex::new(T::zero(), x) * z.powi(p as i32)).exp();
        if n == 1 {
            e
        } else {
            e * zeta.powi(n as i32 - 1)
        }
    });
    let sign = if n % 2 == 0 { T::one() } else { -T::one() };
    integral * omega.powi(n as i32) * (sign / factorial::<T>(n - 1))
}

fn ray_rule<T: Real>() -> GaussLegendre<T> {
    GaussLegendre::new(16)
}

/// Closed form `k_n(0) = ((−1)^n / ((n−1)! p)) Γ(n/p) e^{iπn/(2p)} x^{−n/p}`.
pub fn k_n_at_zero<T: Real>(n: usize, x: T, p: u32) -> Complex<T> {
    let pf = T::lit(f64::from(p));
    let nf = T::from_usize_lossy(n);
    let sign = if n % 2 == 0 { T::one() } else { -T::one() };
    cis(T::PI() * nf / (T::lit(2.0) * pf)) * (sign * k_n_bound(n, x, p))
}

/// `Γ(n/p) x^{−n/p} / ((n−1)! p)`, the uniform bound on `|k_n(u)|`.
pub fn k_n_bound<T: Real>(n: usize, x: T, p: u32) -> T {
    let pf = T::lit(f64::from(p));
    let nf = T::from_usize_lossy(n);
    gamma_real(nf / pf) * x.powf(-nf / pf) / (factorial::<T>(n - 1) * pf)
}

/// The amplitude `q(u)` of an expansion together with its extension past `B`.
///
/// `q = q_base · ψ₀` where `q_base` is held as a Chebyshev model on
/// `[0, √(7/4)·B]` and `ψ₀` is 1 below `√(3/2)·B` and 0 above `√(7/4)·B`.
#[derive(Clone, Debug)]
pub struct AmplitudeData<T: Real> {
    b: T,
    p: u32,
    cutoff: Mollifier<T>,
    proxy: Chebyshev<Complex<T>>,
    derivs: Vec<Chebyshev<Complex<T>>>,
}

impl<T: Real> AmplitudeData<T> {
    /// `support_end` is `√(7/4)·B`; the model is sampled at `degree + 1`
    /// first-kind Chebyshev points of `[0, √(7/4)·B]`.
    pub fn from_base<F>(b: T, p: u32, degree: usize, max_order: usize, base: F) -> Result<Self>
    where
        F: FnMut(T) -> Complex<T>,
    {
        if max_order + 2 > degree {
            return Err(Error::Resolution {
                degree,
                needed: max_order,
                suggested: (max_order + 2).max(2 * degree),
            });
        }
        let end = T::lit(1.75).sqrt() * b;
        Self::from_chebyshev(b, p, max_order, Chebyshev::fit(T::zero(), end, degree, base))
    }

    /// Uses an existing interpolant of the uncut amplitude on `[0, √(7/4)B]`.
    pub fn from_chebyshev(b: T, p: u32, max_order: usize, raw: Chebyshev<Complex<T>>) -> Result<Self> {
        let degree = raw.degree();
        let cutoff = Mollifier::new(T::lit(1.5).sqrt() * b, T::lit(1.75).sqrt() * b);
        if raw.tail_ratio(4) > T::lit(1e-9) && raw.coefficients()[0] != Complex::new(T::zero(), T::zero()) {
            return Err(Error::Resolution {
                degree,
                needed: max_order,
                suggested: 2 * degree,
            });
        }
        let proxy = raw.chop(T::lit(5.0) * T::epsilon());
        let mut derivs = Vec::with_capacity(max_order + 1);
        derivs.push(proxy.clone());
        for k in 1..=max_order {
            let next = derivs[k - 1].derivative();
            derivs.push(next);
        }
        Ok(Self { b, p, cutoff, proxy, derivs })
    }

    /// `B` with `B^p = f(b) − f(a)`.
    pub fn b(&self) -> T {
        self.b
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    /// The Chebyshev model of the uncut amplitude.
    pub fn chebyshev_proxy(&self) -> &Chebyshev<Complex<T>> {
        &self.proxy
    }

    pub fn cutoff(&self) -> Mollifier<T> {
        self.cutoff
    }

    /// Highest derivative order precomputed.
    pub fn max_order(&self) -> usize {
        self.derivs.len() - 1
    }

    pub fn q(&self, u: T) -> Complex<T> {
        if u >= self.cutoff.end {
            return Complex::new(T::zero(), T::zero());
        }
        self.proxy.eval(u) * self.cutoff.value(u)
    }

    /// `q(u), ..., q^{(order)}(u)` as a jet (`order ≤ max_order`).
    pub fn q_jet(&self, u: T, order: usize) -> Jet<Complex<T>> {
        assert!(order <= self.max_order(), "derivative order {order} not precomputed");
        if u >= self.cutoff.end {
            return Jet::constant(Complex::new(T::zero(), T::zero()), order);
        }
        let base: Vec<Complex<T>> = self.derivs[..=order].iter().map(|c| c.eval(u)).collect();
        Jet::from_derivatives(&base).mul_real(&self.cutoff.jet(u, order))
    }

    pub fn q_derivative(&self, u: T, k: usize) -> Complex<T> {
        if u < self.cutoff.start {
            return self.derivs[k].eval(u);
        }
        self.q_jet(u, k).derivative(k)
    }

    /// `q₁(v) = v^{1/p − 1} q(v^{1/p})` and its derivatives at `v > 0`.
    pub fn q1_jet(&self, v: T, order: usize) -> Jet<Complex<T>> {
        let inv_p = T::lit(f64::from(self.p)).recip();
        let var = Jet::variable(v, order);
        let w = var.powf(inv_p);
        let outer = self.q_jet(w.value(), order);
        outer.compose(&w).mul_real(&var.powf(inv_p - T::one()))
    }

    pub fn q1(&self, v: T) -> Complex<T> {
        self.q1_jet(v, 0).value()
    }

    /// `(1/(n! p)) Γ((n+1)/p) q^{(n)}(0) e^{iπ(n+1)/(2p)} x^{−(n+1)/p}` for `n < count`.
    pub fn main_terms(&self, count: usize, x: T) -> Vec<Complex<T>> {
        (0..count)
            .map(|n| {
                let sign = if n % 2 == 0 { T::one() } else { -T::one() };
                // (−1)^{n+1} q^{(n)}(0) k_{n+1}(0)
                self.derivs[n].eval(T::zero()) * k_n_at_zero(n + 1, x, self.p) * (-sign)
            })
            .collect()
    }

    /// `e^{ixB^p} (1/p) q₁^{(n)}(B^p) (i/x)^{n+1}` for `n < count`.
    pub fn i2_terms(&self, count: usize, x: T) -> Vec<Complex<T>> {
        if count == 0 {
            return Vec::new();
        }
        let bp = self.b.powi(self.p as i32);
        let jet = self.q1_jet(bp, count - 1);
        let pf = T::lit(f64::from(self.p));
        let i_over_x = Complex::new(T::zero(), x.recip());
        let phase = cis(x * bp);
        (0..count)
            .map(|n| phase * jet.derivative(n) * i_over_x.powi(n as i32 + 1) / pf)
            .collect()
    }

    /// `(−1)^{N+1} q^{(N)}(0) k_{N+1}(0)`, the boundary part of `R_N^{(1)}`.
    pub fn r1_boundary(&self, n: usize, x: T) -> Complex<T> {
        let sign = if n % 2 == 0 { -T::one() } else { T::one() };
        self.derivs[n].eval(T::zero()) * k_n_at_zero(n + 1, x, self.p) * sign
    }

    /// `(−1)^{N+1} ∫_0^∞ q^{(N+1)}(u) k_{N+1}(u) du`.
    pub fn r1_integral(&self, n: usize, x: T) -> Complex<T> {
        let breaks = self.u_breaks(x);
        let rule = GaussLegendre::new(12);
        let integral = rule.integrate_panels(&breaks, |u| {
            self.q_derivative(u, n + 1) * k_n(n + 1, u, x, self.p)
        });
        let sign = if n % 2 == 0 { -T::one() } else { T::one() };
        integral * sign
    }

    /// [`r1_integral`](Self::r1_integral) for two amplitudes with the same
    /// `B` and `p`, sharing the `k_{N+1}` evaluations.
    pub fn r1_integral_pair(&self, other: &Self, n: usize, x: T) -> (Complex<T>, Complex<T>) {
        assert!(self.b == other.b && self.p == other.p, "amplitudes must share B and p");
        let breaks = self.u_breaks(x);
        let rule = GaussLegendre::new(12);
        let mut a = ComplexSum::new();
        let mut b = ComplexSum::new();
        for w in breaks.windows(2) {
            let mut pa = ComplexSum::new();
            let mut pb = ComplexSum::new();
            for (u, wt) in rule.mapped(w[0], w[1]) {
                let k = k_n(n + 1, u, x, self.p) * wt;
                pa.add(self.q_derivative(u, n + 1) * k);
                pb.add(other.q_derivative(u, n + 1) * k);
            }
            a.add(pa.value());
            b.add(pb.value());
        }
        let sign = if n % 2 == 0 { -T::one() } else { T::one() };
        (a.value() * sign, b.value() * sign)
    }

    /// `R_M^{(2)} = (1/p)(i/x)^M ∫_{B^p}^∞ q₁^{(M)}(v) e^{ixv} dv`.
    pub fn r2(&self, m: usize, x: T) -> Complex<T> {
        let p = self.p as i32;
        let vb = self.b.powi(p);
        let v_end = self.cutoff.end.powi(p);
        let v_start = self.cutoff.start.powi(p);
        let mut breaks = phase_breaks(vb, v_end, x);
        breaks.extend(uniform_breaks(v_start, v_end, 32));
        let breaks = sorted_unique(breaks);
        let rule = GaussLegendre::new(12);
        let integral = rule.integrate_panels(&breaks, |v| self.q1_jet(v, m).derivative(m) * cis(x * v));
        let pf = T::lit(f64::from(self.p));
        integral * Complex::new(T::zero(), x.recip()).powi(m as i32) / pf
    }

    /// Panel breaks on `[0, √(7/4)B]`: half periods of `x u^p` plus a fine
    /// grid over the cutoff ramp.
    fn u_breaks(&self, x: T) -> Vec<T> {
        let end = self.cutoff.end;
        let mut breaks = vec![T::zero()];
        let inv_p = T::lit(f64::from(self.p)).recip();
        let mut j = 1usize;
        loop {
            let u = (T::from_usize_lossy(j) * T::PI() / x).powf(inv_p);
            if u >= end {
                break;
            }
            breaks.push(u);
            j += 1;
        }
        breaks.push(end);
        breaks.extend(uniform_breaks(self.cutoff.start, end, 32));
        sorted_unique(breaks)
    }
}

fn phase_breaks<T: Real>(lo: T, hi: T, x: T) -> Vec<T> {
    crate::quadrature::half_period_breaks(lo, hi, x)
}

fn sorted_unique<T: Real>(mut v: Vec<T>) -> Vec<T> {
    v.sort_by(|a, b| a.partial_cmp(b).expect("finite breakpoints"));
    v.dedup_by(|a, b| (*a - *b).abs() <= T::epsilon() * T::lit(16.0) * (T::one() + b.abs()));
    v
}

type RealFn<T> = Arc<dyn Fn(T) -> T + Send + Sync>;
type ComplexFn<T> = Arc<dyn Fn(T) -> Complex<T> + Send + Sync>;

/// `∫_a^b g(t) e^{ixf(t)} dt` with `f' > 0` on `(a, b)` and an endpoint
/// critical point of order `p` at `a`.
///
/// `f` must remain increasing past `b` far enough that `f − f(a)` reaches
/// `(7/4)^{p/2} (f(b) − f(a))`; the amplitude extension is built there.
#[derive(Clone)]
pub struct PhaseProblem<T: Real> {
    a: T,
    b: T,
    p: u32,
    f: RealFn<T>,
    df: RealFn<T>,
    g: ComplexFn<T>,
    // cumulative ∫ f' at uniform breakpoints of [a, b_ext]
    grid: Vec<T>,
    cumulative: Vec<T>,
    bp: T,
}

impl<T: Real> fmt::Debug for PhaseProblem<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PhaseProblem")
            .field("a", &self.a)
            .field("b", &self.b)
            .field("p", &self.p)
            .field("B^p", &self.bp)
            .finish()
    }
}

const PHASE_PANELS: usize = 32;
const MONOTONICITY_GRID: usize = 1000;

impl<T: Real> PhaseProblem<T> {
    /// `d2f` is used only to check the order of the critical point when `p = 2`.
    pub fn new(
        a: T,
        b: T,
        p: u32,
        f: impl Fn(T) -> T + Send + Sync + 'static,
        df: impl Fn(T) -> T + Send + Sync + 'static,
        d2f: impl Fn(T) -> T + Send + Sync + 'static,
        g: impl Fn(T) -> Complex<T> + Send + Sync + 'static,
    ) -> Result<Self> {
        if !(a < b) {
            return Err(Error::InvalidProblem(format!("need a < b, got a = {a}, b = {b}")));
        }
        if !(1..=4).contains(&p) {
            return Err(Error::InvalidProblem(format!("p = {p} outside 1..=4")));
        }
        for j in 1..=MONOTONICITY_GRID {
            let t = a + (b - a) * T::from_usize_lossy(j) / T::from_usize_lossy(MONOTONICITY_GRID);
            if !(df(t) > T::zero()) {
                return Err(Error::InvalidProblem(format!("f' is not positive at t = {t}")));
            }
        }
        match p {
            1 if !(df(a) > T::zero()) => {
                return Err(Error::InvalidProblem("p = 1 needs f'(a) > 0".into()))
            }
            2 if !(d2f(a) > T::zero()) => {
                return Err(Error::InvalidProblem("p = 2 needs f''(a) > 0".into()))
            }
            _ => {}
        }
        let rule = GaussLegendre::<T>::new(20);
        let width = (b - a) / T::from_usize_lossy(PHASE_PANELS);
        let mut grid = vec![a];
        let mut cumulative = vec![T::zero()];
        for k in 0..PHASE_PANELS {
            let lo = grid[k];
            let hi = if k + 1 == PHASE_PANELS { b } else { a + width * T::from_usize_lossy(k + 1) };
            let inc: T = rule.integrate(lo, hi, |t| df(t));
            grid.push(hi);
            cumulative.push(cumulative[k] + inc);
        }
        let bp = cumulative[PHASE_PANELS];
        let target = T::lit(1.75).powf(T::lit(f64::from(p)) * T::lit(0.5)) * bp;
        let mut steps = 0;
        while *cumulative.last().expect("nonempty") <= target {
            let lo = *grid.last().expect("nonempty");
            let hi = lo + width;
            for j in 1..=8 {
                let t = lo + width * T::from_usize_lossy(j) / T::lit(8.0);
                if !(df(t) > T::zero()) {
                    return Err(Error::InvalidProblem(format!(
                        "f must stay increasing beyond b to extend the amplitude; f'({t}) <= 0"
                    )));
                }
            }
            let inc: T = rule.integrate(lo, hi, |t| df(t));
            grid.push(hi);
            cumulative.push(*cumulative.last().expect("nonempty") + inc);
            steps += 1;
            if steps > 64 * PHASE_PANELS {
                return Err(Error::InvalidProblem("could not extend the phase beyond b".into()));
            }
        }
        Ok(Self {
            a,
            b,
            p,
            f: Arc::new(f),
            df: Arc::new(df),
            g: Arc::new(g),
            grid,
            cumulative,
            bp,
        })
    }

    /// `f = −cos` on `[0, π/2]` with `p = 2`.
    pub fn neg_cos(g: impl Fn(T) -> Complex<T> + Send + Sync + 'static) -> Result<Self> {
        Self::new(
            T::zero(),
            T::FRAC_PI_2(),
            2,
            |t: T| -t.cos(),
            |t: T| t.sin(),
            |t: T| t.cos(),
            g,
        )
    }

    pub fn a(&self) -> T {
        self.a
    }

    pub fn b(&self) -> T {
        self.b
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn f(&self, t: T) -> T {
        (self.f)(t)
    }

    pub fn g(&self, t: T) -> Complex<T> {
        (self.g)(t)
    }

    /// `B` with `B^p = f(b) − f(a)`.
    pub fn big_b(&self) -> T {
        self.bp.powf(T::lit(f64::from(self.p)).recip())
    }

    /// `f(t) − f(a)` as `∫_a^t f'`, free of cancellation near `a`.
    pub fn delta_f(&self, t: T) -> T {
        let last = self.grid.len() - 1;
        let k = self.grid.partition_point(|&g| g <= t).saturating_sub(1).min(last - 1);
        let rule = GaussLegendre::<T>::new(20);
        let inc: T = rule.integrate(self.grid[k], t, |s| (self.df)(s));
        self.cumulative[k] + inc
    }

    /// Solves `f(t) − f(a) = u^p` for `0 ≤ u ≤ B`.
    pub fn invert_phase(&self, u: T) -> Result<T> {
        let big_b = self.big_b();
        if u < T::zero() || u > big_b * (T::one() + T::lit(8.0) * T::epsilon()) {
            return Err(Error::OutOfRange { value: u.as_f64(), lo: 0.0, hi: big_b.as_f64() });
        }
        Ok(self.invert_extended(u.min(big_b)))
    }

    /// Inverse of `t ↦ (f(t) − f(a))^{1/p}` on the extended interval.
    fn invert_extended(&self, u: T) -> T {
        if u <= T::zero() {
            return self.a;
        }
        let target = u.powi(self.p as i32);
        let k = self.cumulative.partition_point(|&c| c < target).max(1) - 1;
        let k = k.min(self.grid.len() - 2);
        let mut lo = self.grid[k];
        let mut hi = self.grid[k + 1];
        let mut t = lo + (hi - lo) * (target - self.cumulative[k])
            / (self.cumulative[k + 1] - self.cumulative[k]);
        for _ in 0..100 {
            let r = self.delta_f(t) - target;
            if r > T::zero() {
                hi = hi.min(t);
            } else {
                lo = lo.max(t);
            }
            if r == T::zero() {
                break;
            }
            let d = (self.df)(t);
            let mut next = t - r / d;
            if !(next >= lo && next <= hi) || !next.is_finite() {
                next = (lo + hi) * T::lit(0.5);
            }
            let step = (next - t).abs();
            t = next;
            if step <= T::lit(2.0) * T::epsilon() * (T::one() + t.abs()) {
                break;
            }
        }
        t
    }

    /// Builds the amplitude data with a degree-`degree` model able to supply
    /// derivatives up to `max_order`.
    pub fn amplitude(&self, degree: usize, max_order: usize) -> Result<AmplitudeData<T>> {
        let p = self.p as i32;
        let pf = T::lit(f64::from(self.p));
        AmplitudeData::from_base(self.big_b(), self.p, degree, max_order, |u| {
            let t = self.invert_extended(u);
            let dt = pf * u.powi(p - 1) / (self.df)(t);
            (self.g)(t) * dt
        })
    }

    /// Stationary-phase decomposition with `N` terms at `a` and `M` at `b`,
    /// using a model of degree [`DEFAULT_DEGREE`].
    pub fn expand(&self, x: T, n: usize, m: usize) -> Result<ExpansionResult<T>> {
        let amp = self.amplitude(DEFAULT_DEGREE, (n + 1).max(m))?;
        Ok(self.expand_with(&amp, x, n, m))
    }

    pub fn expand_with(&self, amp: &AmplitudeData<T>, x: T, n: usize, m: usize) -> ExpansionResult<T> {
        assert!(n >= 1 && m >= 1, "N and M must be positive");
        assert!(amp.max_order() >= (n + 1).max(m), "amplitude lacks derivatives");
        let main_terms = amp.main_terms(n, x);
        let i2_terms = amp.i2_terms(m, x);
        let r1 = amp.r1_boundary(n, x) + amp.r1_integral(n, x);
        let r2 = amp.r2(m, x);
        let fa = (self.f)(self.a);
        let sum = |v: &[Complex<T>]| v.iter().fold(ComplexSum::new(), |mut s, &z| {
            s.add(z);
            s
        });
        let mut i1 = sum(&main_terms);
        i1.add(r1);
        let mut i2 = sum(&i2_terms);
        i2.add(r2);
        let total = cis(x * fa) * (i1.value() - i2.value());
        ExpansionResult { main_terms, i2_terms, r1, r2, total }
    }

    /// Direct quadrature of `∫_a^b g e^{ixf}` on half periods of `x f`.
    pub fn oracle(&self, x: T) -> OracleResult<T> {
        let mut panels = self.half_period_breaks(x);
        let tol = T::lit(ORACLE_TOLERANCE);
        let mut best = OracleResult {
            value: Complex::new(T::zero(), T::zero()),
            error: T::infinity(),
            converged: false,
        };
        for _ in 0..6 {
            let coarse = self.panel_sum(&panels, 10, x);
            let fine = self.panel_sum(&panels, 20, x);
            let err = (fine - coarse).norm();
            best = OracleResult { value: fine, error: err, converged: false };
            if err <= tol * fine.norm() || err <= T::lit(1e-15) {
                best.converged = true;
                return best;
            }
            panels = refine(&panels);
        }
        best
    }

    fn panel_sum(&self, breaks: &[T], order: usize, x: T) -> Complex<T> {
        let rule = GaussLegendre::new(order);
        rule.integrate_panels(breaks, |t| (self.g)(t) * cis(x * (self.f)(t)))
    }

    fn half_period_breaks(&self, x: T) -> Vec<T> {
        let count = (x * self.bp / T::PI()).ceil().to_usize().unwrap_or(1).max(1);
        let mut breaks = Vec::with_capacity(count + 1);
        breaks.push(self.a);
        let inv_p = T::lit(f64::from(self.p)).recip();
        for j in 1..count {
            let u = (T::from_usize_lossy(j) * T::PI() / x).powf(inv_p);
            breaks.push(self.invert_extended(u));
        }
        breaks.push(self.b);
        sorted_unique(breaks)
    }
}

fn refine<T: Real>(breaks: &[T]) -> Vec<T> {
    let mut out = Vec::with_capacity(2 * breaks.len());
    for w in breaks.windows(2) {
        out.push(w[0]);
        out.push((w[0] + w[1]) * T::lit(0.5));
    }
    out.push(*breaks.last().expect("nonempty"));
    out
}

/// Decomposition `I(x) = e^{ixf(a)} [Σ main + R₁ − (Σ i2 + R₂)]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpansionResult<T> {
    pub main_terms: Vec<Complex<T>>,
    pub i2_terms: Vec<Complex<T>>,
    pub r1: Complex<T>,
    pub r2: Complex<T>,
    pub total: Complex<T>,
}

/// Direct quadrature value with an order-doubling error estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleResult<T> {
    pub value: Complex<T>,
    pub error: T,
    /// `false` when the relative tolerance was not met after refinement.
    pub converged: bool,
}
