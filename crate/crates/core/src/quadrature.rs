//! Quadrature rules shared by every module.
//!
//! * [`GaussLegendre`]: fixed-order rule, used panel-wise.
//! * [`half_period_breaks`]: panel boundaries at half periods of a linear
//!   phase, the strategy used for all direct oscillatory integrals.
//! * [`adaptive`] / [`semi_infinite`]: globally adaptive Gauss–Kronrod (7/15)
//!   for non-oscillatory integrands.
//! * [`FilonLegendre`]: Filon-type rule for `∫ A(x) e^{iωx} dx` with smooth `A`,
//!   whose cost does not grow with `ω`.

use num_complex::Complex;

use crate::jet::JetCoef;
use crate::scalar::{cis, ComplexSum, Real};

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
#[derive(Clone, Debug)]
pub struct GaussLegendre<T> {
    nodes: Vec<T>,
    weights: Vec<T>,
}

impl<T: Real> GaussLegendre<T> {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre order must be positive");
        let nf = T::from_usize_lossy(n);
        let mut nodes = vec![T::zero(); n];
        let mut weights = vec![T::zero(); n];
        let m = (n + 1) / 2;
        for i in 0..m {
            let mut x = (T::PI() * (T::from_usize_lossy(i) + T::lit(0.75)) / (nf + T::lit(0.5))).cos();
            let mut dp = T::one();
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x = x - dx;
                if dx.abs() <= T::epsilon() * T::lit(4.0) {
                    let (_, d) = legendre_with_derivative(n, x);
                    dp = d;
                    break;
                }
            }
            let w = T::lit(2.0) / ((T::one() - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = T::zero();
        }
        Self { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    /// Nodes and weights mapped to `[a, b]`.
    pub fn mapped(&self, a: T, b: T) -> impl Iterator<Item = (T, T)> + '_ {
        let half = (b - a) * T::lit(0.5);
        let mid = (a + b) * T::lit(0.5);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }

    pub fn integrate<S, F>(&self, a: T, b: T, mut f: F) -> S
    where
        S: JetCoef<Real = T>,
        F: FnMut(T) -> S,
    {
        self.mapped(a, b).fold(S::zero(), |acc, (x, w)| acc + f(x) * w)
    }

    /// Sums the rule over consecutive panels `breaks[i]..breaks[i+1]` with
    /// compensated accumulation.
    pub fn integrate_panels<F>(&self, breaks: &[T], mut f: F) -> Complex<T>
    where
        F: FnMut(T) -> Complex<T>,
    {
        let mut acc = ComplexSum::new();
        for w in breaks.windows(2) {
            let mut panel = ComplexSum::new();
            for (x, wt) in self.mapped(w[0], w[1]) {
                panel.add(f(x) * wt);
            }
            acc.add(panel.value());
        }
        acc.value()
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre_with_derivative<T: Real>(n: usize, x: T) -> (T, T) {
    let mut p0 = T::one();
    let mut p1 = x;
    if n == 0 {
        return (T::one(), T::zero());
    }
    for k in 2..=n {
        let kf = T::from_usize_lossy(k);
        let p2 = ((T::lit(2.0) * kf - T::one()) * x * p1 - (kf - T::one()) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = T::from_usize_lossy(n);
    let d = nf * (x * p1 - p0) / (x * x - T::one());
    (p1, d)
}

/// Panel boundaries on `[a, b]` so that `omega·x` advances by at most `π` per
/// panel. Always returns at least one panel.
pub fn half_period_breaks<T: Real>(a: T, b: T, omega: T) -> Vec<T> {
    let span = b - a;
    let cycles = (omega.abs() * span / T::PI()).ceil();
    let n = cycles.to_usize().unwrap_or(1).max(1);
    uniform_breaks(a, b, n)
}

pub fn uniform_breaks<T: Real>(a: T, b: T, n: usize) -> Vec<T> {
    let nf = T::from_usize_lossy(n);
    (0..=n)
        .map(|i| {
            if i == n {
                b
            } else {
                a + (b - a) * T::from_usize_lossy(i) / nf
            }
        })
        .collect()
}

/// `∫_a^b f(x) e^{iωx} dx` by Gauss–Legendre on half-period panels.
pub fn oscillatory<T, F>(rule: &GaussLegendre<T>, a: T, b: T, omega: T, mut f: F) -> Complex<T>
where
    T: Real,
    F: FnMut(T) -> Complex<T>,
{
    let breaks = half_period_breaks(a, b, omega);
    rule.integrate_panels(&breaks, |x| f(x) * cis(omega * x))
}

/// Outcome of an adaptive integration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Adaptive<T> {
    pub value: T,
    pub error: T,
    pub converged: bool,
}

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn kronrod15<T: Real, F: FnMut(T) -> T>(f: &mut F, a: T, b: T) -> (T, T) {
    let half = (b - a) * T::lit(0.5);
    let mid = (a + b) * T::lit(0.5);
    let fc = f(mid);
    let mut resk = fc * T::lit(WGK[7]);
    let mut resg = fc * T::lit(WG[3]);
    for j in 0..7 {
        let dx = half * T::lit(XGK[j]);
        let s = f(mid - dx) + f(mid + dx);
        resk = resk + s * T::lit(WGK[j]);
        if j % 2 == 1 {
            resg = resg + s * T::lit(WG[j / 2]);
        }
    }
    (resk * half, ((resk - resg) * half).abs())
}

/// Globally adaptive Gauss–Kronrod on `[a, b]`; stops when the summed error
/// estimate is below `max(abs_tol, rel_tol·|value|)` or after `max_intervals`.
pub fn adaptive<T: Real, F: FnMut(T) -> T>(
    mut f: F,
    a: T,
    b: T,
    rel_tol: T,
    abs_tol: T,
    max_intervals: usize,
) -> Adaptive<T> {
    let (v, e) = kronrod15(&mut f, a, b);
    let mut intervals = vec![(a, b, v, e)];
    loop {
        let value: T = intervals.iter().map(|iv| iv.2).sum();
        let error: T = intervals.iter().map(|iv| iv.3).sum();
        let target = abs_tol.max(rel_tol * value.abs());
        if error <= target {
            return Adaptive { value, error, converged: true };
        }
        if intervals.len() >= max_intervals {
            return Adaptive { value, error, converged: false };
        }
        let (idx, _) = intervals
            .iter()
            .enumerate()
            .fold((0, T::neg_infinity()), |best, (i, iv)| {
                if iv.3 > best.1 {
                    (i, iv.3)
                } else {
                    best
                }
            });
        let (lo, hi, _, _) = intervals.swap_remove(idx);
        let mid = (lo + hi) * T::lit(0.5);
        if mid <= lo || mid >= hi {
            return Adaptive { value, error, converged: false };
        }
        let (v1, e1) = kronrod15(&mut f, lo, mid);
        let (v2, e2) = kronrod15(&mut f, mid, hi);
        intervals.push((lo, mid, v1, e1));
        intervals.push((mid, hi, v2, e2));
    }
}

/// Adaptive integration over `[a, ∞)` through `x = a + s/(1-s)`.
pub fn semi_infinite<T: Real, F: FnMut(T) -> T>(
    mut f: F,
    a: T,
    rel_tol: T,
    abs_tol: T,
    max_intervals: usize,
) -> Adaptive<T> {
    let g = |s: T| {
        let one_minus = T::one() - s;
        if one_minus <= T::zero() {
            return T::zero();
        }
        let x = a + s / one_minus;
        let v = f(x) / (one_minus * one_minus);
        if v.is_finite() {
            v
        } else {
            T::zero()
        }
    };
    adaptive(g, T::zero(), T::one(), rel_tol, abs_tol, max_intervals)
}

/// Filon-type rule on panels: the amplitude is expanded in Legendre
/// polynomials from its values at Gauss nodes and the oscillatory moments
/// `∫ P_k(x) e^{iμx} dx = 2 i^k j_k(μ)` are applied exactly.
#[derive(Clone, Debug)]
pub struct FilonLegendre<T> {
    rule: GaussLegendre<T>,
    // legendre[k][j] = (2k+1)/2 · w_j · P_k(x_j)
    projector: Vec<Vec<T>>,
}

impl<T: Real> FilonLegendre<T> {
    pub fn new(order: usize) -> Self {
        let rule = GaussLegendre::new(order);
        let n = rule.order();
        let mut projector = vec![vec![T::zero(); n]; n];
        for (j, (&x, &w)) in rule.nodes().iter().zip(rule.weights()).enumerate() {
            let mut p0 = T::one();
            let mut p1 = x;
            for k in 0..n {
                let pk = if k == 0 {
                    T::one()
                } else if k == 1 {
                    x
                } else {
                    let kf = T::from_usize_lossy(k);
                    let p2 = ((T::lit(2.0) * kf - T::one()) * x * p1 - (kf - T::one()) * p0) / kf;
                    p0 = p1;
                    p1 = p2;
                    p2
                };
                let kf = T::from_usize_lossy(k);
                projector[k][j] = (T::lit(2.0) * kf + T::one()) * T::lit(0.5) * w * pk;
            }
        }
        Self { rule, projector }
    }

    pub fn order(&self) -> usize {
        self.rule.order()
    }

    /// `∫_a^b A(x) e^{iωx} dx` on a single panel.
    pub fn panel<F: FnMut(T) -> Complex<T>>(&self, a: T, b: T, omega: T, f: &mut F) -> Complex<T> {
        let half = (b - a) * T::lit(0.5);
        let mid = (a + b) * T::lit(0.5);
        let values: Vec<Complex<T>> = self.rule.nodes().iter().map(|&x| f(mid + half * x)).collect();
        self.panel_from_values(a, b, omega, &values)
    }

    fn panel_from_values(&self, a: T, b: T, omega: T, values: &[Complex<T>]) -> Complex<T> {
        let n = self.rule.order();
        let half = (b - a) * T::lit(0.5);
        let mid = (a + b) * T::lit(0.5);
        let mu = omega * half;
        let jk = spherical_bessel_sequence(n, mu.abs());
        let mut acc = ComplexSum::new();
        let mut ik = Complex::new(T::one(), T::zero());
        let i_sign = if mu >= T::zero() {
            Complex::new(T::zero(), T::one())
        } else {
            Complex::new(T::zero(), -T::one())
        };
        for k in 0..n {
            let mut ak = Complex::new(T::zero(), T::zero());
            for (j, v) in values.iter().enumerate() {
                ak = ak + *v * self.projector[k][j];
            }
            acc.add(ak * ik * (T::lit(2.0) * jk[k]));
            ik = ik * i_sign;
        }
        acc.value() * half * cis_product(omega, mid)
    }

    pub fn integrate<F: FnMut(T) -> Complex<T>>(&self, breaks: &[T], omega: T, mut f: F) -> Complex<T> {
        let mut acc = ComplexSum::new();
        for w in breaks.windows(2) {
            acc.add(self.panel(w[0], w[1], omega, &mut f));
        }
        acc.value()
    }

    /// The points at which [`integrate`](Self::integrate) samples the
    /// amplitude, panel by panel.
    pub fn panel_nodes(&self, breaks: &[T]) -> Vec<T> {
        breaks
            .windows(2)
            .flat_map(|w| {
                let half = (w[1] - w[0]) * T::lit(0.5);
                let mid = (w[0] + w[1]) * T::lit(0.5);
                self.rule.nodes().iter().map(move |&x| mid + half * x)
            })
            .collect()
    }

    /// [`integrate`](Self::integrate) with the amplitude given at
    /// [`panel_nodes`](Self::panel_nodes), so it can be reused across `ω`.
    pub fn integrate_sampled(&self, breaks: &[T], omega: T, values: &[Complex<T>]) -> Complex<T> {
        let n = self.rule.order();
        assert_eq!(values.len(), n * (breaks.len() - 1), "one value per panel node");
        let mut acc = ComplexSum::new();
        for (w, v) in breaks.windows(2).zip(values.chunks(n)) {
            acc.add(self.panel_from_values(w[0], w[1], omega, v));
        }
        acc.value()
    }
}

/// `e^{iab}` with the rounding error of `a·b` recovered by a fused
/// multiply-add, which matters once `|ab|` reaches thousands of radians.
fn cis_product<T: Real>(a: T, b: T) -> Complex<T> {
    let p = a * b;
    let e = a.mul_add(b, -p);
    cis(p) * cis(e)
}

/// `j_0(x), ..., j_{n-1}(x)` for `x ≥ 0`.
pub fn spherical_bessel_sequence<T: Real>(n: usize, x: T) -> Vec<T> {
    let mut out = vec![T::zero(); n];
    if n == 0 {
        return out;
    }
    if x < T::one() {
        // power series x^k Σ_m (-x²/2)^m / (m! (2k+2m+1)!!)
        let mut lead = T::one(); // x^k / (2k+1)!!
        for (k, slot) in out.iter_mut().enumerate() {
            let kf = T::from_usize_lossy(k);
            if k > 0 {
                lead = lead * x / (T::lit(2.0) * kf + T::one());
            }
            let mut term = lead;
            let mut sum = lead;
            for m in 1..40 {
                let mf = T::from_usize_lossy(m);
                term = term * (-(x * x) * T::lit(0.5)) / (mf * (T::lit(2.0) * (kf + mf) + T::one()));
                sum = sum + term;
                if term.abs() <= T::epsilon() * sum.abs() {
                    break;
                }
            }
            *slot = sum;
        }
        return out;
    }
    let (s, c) = x.sin_cos();
    let j0 = s / x;
    if x >= T::from_usize_lossy(n) {
        out[0] = j0;
        if n > 1 {
            out[1] = s / (x * x) - c / x;
        }
        for k in 2..n {
            let kf = T::from_usize_lossy(k - 1);
            out[k] = (T::lit(2.0) * kf + T::one()) / x * out[k - 1] - out[k - 2];
        }
        return out;
    }
    // Miller's backward recurrence, normalized by Σ (2k+1) j_k² = 1.
    let start = n + 20 + x.to_usize().unwrap_or(0);
    let mut jp1 = T::zero();
    let mut jk = T::lit(1e-30);
    let mut seq = vec![T::zero(); start + 1];
    seq[start] = jk;
    let big = T::lit(1e30);
    for k in (1..=start).rev() {
        let kf = T::from_usize_lossy(k);
        let jm1 = (T::lit(2.0) * kf + T::one()) / x * jk - jp1;
        jp1 = jk;
        jk = jm1;
        seq[k - 1] = jm1;
        if jm1.abs() > big {
            for v in seq.iter_mut().skip(k - 1) {
                *v = *v / big;
            }
            jp1 = jp1 / big;
            jk = jk / big;
        }
    }
    let norm: T = seq
        .iter()
        .enumerate()
        .map(|(k, &v)| (T::lit(2.0) * T::from_usize_lossy(k) + T::one()) * v * v)
        .sum();
    let mut scale = T::one() / norm.sqrt();
    if (seq[0] * scale) * j0 < T::zero() {
        scale = -scale;
    }
    for k in 0..n {
        out[k] = seq[k] * scale;
    }
    out
}
