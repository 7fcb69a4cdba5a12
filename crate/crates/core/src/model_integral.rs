//! Polar reduction of the model integral `∫ e^{ih⟨λ,E⟩} σ(λ) dλ` over a ball
//! of radius `r` and its exact decomposition into a main term and the three
//! remainders `R⁽⁰⁾`, `R⁽¹⁾`, `R⁽²⁾`.
//!
//! With `J` a rotation taking `e₁` to `E` and `ς = σ∘J`,
//!
//! ```text
//! ξ(r,h) = r^{l−1} ∫_0^π e^{ihr cos θ} (sin θ)^{l−2} D_r(θ) dθ
//! ```
//!
//! where `D_r` integrates `ς(rΘ)` over the remaining angles. Splitting at
//! `θ = π/2` and substituting `1 − cos θ = u²` turns each half into an
//! endpoint stationary-phase integral with `p = 2`, `B = 1`, which the
//! [`stationary_phase`](crate::stationary_phase) engine expands exactly.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex;
use rayon::prelude::*;

use crate::chebyshev::Chebyshev;
use crate::error::{Error, Result};
use crate::plancherel::CFunction;
use crate::profiles::Profile;
use crate::quadrature::{uniform_breaks, FilonLegendre, GaussLegendre};
use crate::root_data::{dot, norm};
use crate::scalar::{cis, ComplexSum, Real};
use crate::special_gamma::gamma_real;
use crate::stationary_phase::AmplitudeData;

/// Starting degree of the Chebyshev models of `q` and `q̃`.
pub const PROXY_DEGREE: usize = 96;

/// Largest degree tried before a resolution error is reported.
pub const MAX_PROXY_DEGREE: usize = 768;

const PROXY_TAIL: f64 = 1e-13;

/// Below this value of `hr` the decomposition is not attempted.
pub const MIN_HR: f64 = 2.0;

const TRAPEZOID_NODES: usize = 64;
const SPHERE_GAUSS_NODES: usize = 24;
const THETA_RULE: usize = 20;
const TAIL_TOLERANCE: f64 = 1e-14;

type SymbolFn<T> = Arc<dyn Fn(&[T]) -> Complex<T> + Send + Sync>;

/// A symbol `σ` on `ℝ^l` with its vanishing order `a` at the origin and
/// growth exponent `n − l`.
#[derive(Clone)]
pub struct Symbol<T: Real> {
    name: String,
    dim: usize,
    vanishing_order: usize,
    growth_exponent: T,
    radial: bool,
    eval: SymbolFn<T>,
}

impl<T: Real> fmt::Debug for Symbol<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Symbol")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .field("vanishing_order", &self.vanishing_order)
            .field("growth_exponent", &self.growth_exponent)
            .finish()
    }
}

fn real<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

impl<T: Real> Symbol<T> {
    pub fn new(
        name: impl Into<String>,
        dim: usize,
        vanishing_order: usize,
        growth_exponent: T,
        eval: impl Fn(&[T]) -> Complex<T> + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            dim,
            vanishing_order,
            growth_exponent,
            radial: false,
            eval: Arc::new(eval),
        }
    }

    /// Marks the symbol as a function of `|λ|` only.
    pub fn radial(mut self) -> Self {
        self.radial = true;
        self
    }

    /// `e^{−|λ|²}`
    pub fn gaussian(dim: usize) -> Self {
        Self::new("gaussian", dim, 0, T::zero(), |l: &[T]| real((-dot(l, l)).exp())).radial()
    }

    /// `|λ|² e^{−|λ|²}`, vanishing to order 2.
    pub fn norm_sq_gaussian(dim: usize) -> Self {
        Self::new("norm2-gaussian", dim, 2, T::zero(), |l: &[T]| {
            let s = dot(l, l);
            real(s * (-s).exp())
        })
        .radial()
    }

    /// `e^{−Σ w_k λ_k²}`; not radial unless all weights agree.
    pub fn anisotropic_gaussian(weights: Vec<T>) -> Self {
        let dim = weights.len();
        Self::new("anisotropic-gaussian", dim, 0, T::zero(), move |l: &[T]| {
            let s: T = l.iter().zip(&weights).map(|(&x, &w)| w * x * x).sum();
            real((-s).exp())
        })
    }

    /// The Plancherel density `|c(λ)|^{−2}`: vanishing order `2d`, growth `n − l`.
    pub fn plancherel(cf: CFunction<T>) -> Self {
        let datum = cf.datum();
        let dim = datum.rank();
        let a = cf.vanishing_order();
        let growth = T::from_usize_lossy(datum.n() - dim);
        let name = format!("plancherel-{}", datum.name());
        Self::new(name, dim, a, growth, move |l: &[T]| real(cf.density(l)))
    }

    /// `λ₁`
    pub fn linear(dim: usize) -> Self {
        Self::new("linear", dim, 1, T::one(), |l: &[T]| real(l[0]))
    }

    pub fn constant(dim: usize, c: Complex<T>) -> Self {
        Self::new("constant", dim, 0, T::zero(), move |_: &[T]| c).radial()
    }

    pub fn zero(dim: usize) -> Self {
        Self::constant(dim, Complex::new(T::zero(), T::zero()))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vanishing_order(&self) -> usize {
        self.vanishing_order
    }

    pub fn growth_exponent(&self) -> T {
        self.growth_exponent
    }

    /// `n = l + growth_exponent`, the dimension entering the remainder bound.
    pub fn space_dimension(&self) -> T {
        T::from_usize_lossy(self.dim) + self.growth_exponent
    }

    pub fn is_radial(&self) -> bool {
        self.radial
    }

    pub fn eval(&self, lambda: &[T]) -> Complex<T> {
        (self.eval)(lambda)
    }

    /// `max |σ(sω)| / (1+s)^{growth}` over the given directions and radii.
    pub fn growth_ratio(&self, directions: &[Vec<T>], radii: &[T]) -> T {
        self.sup_over(directions, radii, |s| (T::one() + s).powf(self.growth_exponent))
    }

    /// `max |σ(sω)| / s^a` over the given directions and radii.
    pub fn vanishing_ratio(&self, directions: &[Vec<T>], radii: &[T]) -> T {
        let a = self.vanishing_order as i32;
        self.sup_over(directions, radii, |s| s.powi(a))
    }

    fn sup_over(&self, directions: &[Vec<T>], radii: &[T], weight: impl Fn(T) -> T) -> T {
        let mut sup = T::zero();
        for dir in directions {
            let n = norm(dir);
            for &s in radii {
                let point: Vec<T> = dir.iter().map(|&d| d * s / n).collect();
                sup = sup.max(self.eval(&point).norm() / weight(s));
            }
        }
        sup
    }
}

/// A rotation `J` of `ℝ^l`, stored by columns `J e_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct Rotation<T> {
    columns: Vec<Vec<T>>,
}

impl<T: Real> Rotation<T> {
    pub fn identity(dim: usize) -> Self {
        let columns = (0..dim)
            .map(|k| (0..dim).map(|j| if j == k { T::one() } else { T::zero() }).collect())
            .collect();
        Self { columns }
    }

    pub fn dim(&self) -> usize {
        self.columns.len()
    }

    /// Row-major matrix entries `J[i][j]`.
    pub fn matrix(&self) -> Vec<Vec<T>> {
        let l = self.dim();
        (0..l).map(|i| (0..l).map(|j| self.columns[j][i]).collect()).collect()
    }

    /// `Jλ`
    pub fn apply(&self, lambda: &[T]) -> Vec<T> {
        let mut out = vec![T::zero(); self.dim()];
        for (col, &c) in self.columns.iter().zip(lambda) {
            for (o, &v) in out.iter_mut().zip(col) {
                *o = *o + c * v;
            }
        }
        out
    }

    /// `J⁻¹v = Jᵀv`
    pub fn apply_inverse(&self, v: &[T]) -> Vec<T> {
        self.columns.iter().map(|col| dot(col, v)).collect()
    }

    /// `max |JᵀJ − Id|` entrywise.
    pub fn orthogonality_error(&self) -> T {
        let mut worst = T::zero();
        for (i, a) in self.columns.iter().enumerate() {
            for (j, b) in self.columns.iter().enumerate() {
                let target = if i == j { T::one() } else { T::zero() };
                worst = worst.max((dot(a, b) - target).abs());
            }
        }
        worst
    }

    pub fn determinant(&self) -> T {
        determinant(self.matrix())
    }
}

fn determinant<T: Real>(mut m: Vec<Vec<T>>) -> T {
    let n = m.len();
    let mut det = T::one();
    for c in 0..n {
        let pivot = (c..n)
            .max_by(|&a, &b| m[a][c].abs().partial_cmp(&m[b][c].abs()).expect("finite"))
            .expect("nonempty");
        if m[pivot][c] == T::zero() {
            return T::zero();
        }
        if pivot != c {
            m.swap(pivot, c);
            det = -det;
        }
        det = det * m[c][c];
        for r in c + 1..n {
            let f = m[r][c] / m[c][c];
            for k in c..n {
                let v = m[c][k];
                m[r][k] = m[r][k] - f * v;
            }
        }
    }
    det
}

/// A proper rotation with `J e₁ = E`, by Gram–Schmidt on `E, e₁, …, e_l`.
pub fn rotate_to_axis<T: Real>(e: &[T]) -> Result<Rotation<T>> {
    let len = norm(e);
    if (len - T::one()).abs() > T::lit(1e-12) || e.is_empty() {
        return Err(Error::Normalization { norm: len.as_f64() });
    }
    let l = e.len();
    let mut columns: Vec<Vec<T>> = vec![e.iter().map(|&x| x / len).collect()];
    for k in 0..l {
        if columns.len() == l {
            break;
        }
        let mut v: Vec<T> = (0..l).map(|j| if j == k { T::one() } else { T::zero() }).collect();
        // two passes of modified Gram–Schmidt
        for _ in 0..2 {
            for c in &columns {
                let d = dot(&v, c);
                for (x, &y) in v.iter_mut().zip(c) {
                    *x = *x - d * y;
                }
            }
        }
        let nv = norm(&v);
        if nv > T::lit(1e-6) {
            columns.push(v.into_iter().map(|x| x / nv).collect());
        }
    }
    let mut rot = Rotation { columns };
    if l > 1 && rot.determinant() < T::zero() {
        let last = rot.columns.last_mut().expect("l > 1");
        for x in last.iter_mut() {
            *x = -*x;
        }
    }
    Ok(rot)
}

/// Quadrature on the unit sphere `S^m ⊂ ℝ^{m+1}`: points and weights summing
/// to its area. `S^0 = {±1}` with unit weights.
fn sphere_rule<T: Real>(m: usize) -> Vec<(Vec<T>, T)> {
    match m {
        0 => vec![(vec![T::one()], T::one()), (vec![-T::one()], T::one())],
        1 => {
            let n = TRAPEZOID_NODES;
            let w = T::lit(2.0) * T::PI() / T::from_usize_lossy(n);
            (0..n)
                .map(|j| {
                    let phi = T::lit(2.0) * T::PI() * T::from_usize_lossy(j) / T::from_usize_lossy(n);
                    (vec![phi.cos(), phi.sin()], w)
                })
                .collect()
        }
        _ => {
            let inner = sphere_rule::<T>(m - 1);
            let rule = GaussLegendre::<T>::new(SPHERE_GAUSS_NODES);
            let mut out = Vec::with_capacity(rule.order() * inner.len());
            for (theta, w) in rule.mapped(T::zero(), T::PI()) {
                let (s, c) = theta.sin_cos();
                let jac = w * s.powi(m as i32 - 1);
                for (p, wp) in &inner {
                    let mut point = Vec::with_capacity(m + 1);
                    point.push(c);
                    point.extend(p.iter().map(|&x| s * x));
                    out.push((point, jac * *wp));
                }
            }
            out
        }
    }
}

/// Area of the unit sphere `S^m`.
pub fn sphere_area<T: Real>(m: usize) -> T {
    let half = T::from_usize_lossy(m + 1) * T::lit(0.5);
    T::lit(2.0) * T::PI().powf(half) / gamma_real(half)
}

/// Parts of `ξ(r,h)`; every field carries the factor `r^{l−1}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct XiDecomposition<T> {
    pub direct: Complex<T>,
    pub main: Complex<T>,
    pub r0: Complex<T>,
    pub r1: Complex<T>,
    pub r2: Complex<T>,
    /// Discrepancy between the closed-form main term and its proxy-based
    /// counterpart, plus the `b`-endpoint terms that cancel analytically.
    pub boundary: Complex<T>,
    /// `r^{l−1}`
    pub scale: T,
}

impl<T: Real> XiDecomposition<T> {
    /// `R(h,r) = R⁽⁰⁾ + R⁽¹⁾ + R⁽²⁾` without the factor `r^{l−1}`.
    pub fn remainder_unscaled(&self) -> Complex<T> {
        (self.r0 + self.r1 + self.r2) / self.scale
    }

    /// `direct − (main + R0 + R1 + R2)`
    pub fn residual(&self) -> Complex<T> {
        self.direct - (self.main + self.r0 + self.r1 + self.r2)
    }
}

/// `q` and `q̃` for one radius.
#[derive(Clone, Debug)]
pub struct QFamily<T: Real> {
    pub q: AmplitudeData<T>,
    pub q_tilde: AmplitudeData<T>,
}

/// `∫ Ψ(r) ξ(r,h) dr` and its main term.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PsiIntegral<T> {
    pub direct: Complex<T>,
    pub main: Complex<T>,
}

/// The model integral for a symbol and a direction `E`.
#[derive(Clone, Debug)]
pub struct ModelIntegral<T: Real> {
    symbol: Symbol<T>,
    rotation: Rotation<T>,
    axis: Vec<T>,
    sphere: Vec<(Vec<T>, T)>,
}

impl<T: Real> ModelIntegral<T> {
    pub fn new(symbol: Symbol<T>, e: &[T]) -> Result<Self> {
        let l = symbol.dim();
        if l < 2 {
            return Err(Error::RankOne);
        }
        if e.len() != l {
            return Err(Error::InvalidArgument(format!(
                "direction has {} components, symbol lives on R^{l}",
                e.len()
            )));
        }
        let rotation = rotate_to_axis(e)?;
        Ok(Self { symbol, rotation, axis: e.to_vec(), sphere: sphere_rule(l - 2) })
    }

    pub fn symbol(&self) -> &Symbol<T> {
        &self.symbol
    }

    pub fn rotation(&self) -> &Rotation<T> {
        &self.rotation
    }

    fn l(&self) -> usize {
        self.symbol.dim()
    }

    /// `ς(λ) = σ(Jλ)`
    pub fn varsigma(&self, lambda: &[T]) -> Complex<T> {
        self.symbol.eval(&self.rotation.apply(lambda))
    }

    /// `C_l = (2π)^{(l−1)/2}`
    pub fn constant(&self) -> T {
        (T::lit(2.0) * T::PI()).powf(T::from_usize_lossy(self.l() - 1) * T::lit(0.5))
    }

    /// `D_r(θ₁)`: the integral of `ς(r(cos θ₁, sin θ₁ ω))` over `ω ∈ S^{l−2}`.
    pub fn d_r(&self, r: T, theta1: T) -> Complex<T> {
        let (s, c) = theta1.sin_cos();
        let mut acc = ComplexSum::new();
        let mut point = vec![T::zero(); self.l()];
        for (omega, w) in &self.sphere {
            point[0] = r * c;
            for (p, &o) in point[1..].iter_mut().zip(omega) {
                *p = r * s * o;
            }
            acc.add(self.symbol.eval(&self.rotation.apply(&point)) * *w);
        }
        acc.value()
    }

    /// `ξ(r,h) = r^{l−1} ∫_0^π e^{ihr cos θ} (sin θ)^{l−2} D_r(θ) dθ`.
    pub fn xi_direct(&self, r: T, h: T) -> Complex<T> {
        let x = h * r;
        let l = self.l();
        let breaks = theta_breaks(x);
        let rule = GaussLegendre::new(THETA_RULE);
        let integral = rule.integrate_panels(&breaks, |theta| {
            let (s, c) = theta.sin_cos();
            cis(x * c) * self.d_r(r, theta) * s.powi(l as i32 - 2)
        });
        integral * r.powi(l as i32 - 1)
    }

    /// Models of `q(u) = 2u^{l−2}(2−u²)^{(l−3)/2} conj(D_r(θ(u))) ψ₀(u)` and of
    /// `q̃`, which uses `D_r(π − θ(u))`, with `1 − cos θ(u) = u²`.
    pub fn q_family(&self, r: T, max_order: usize) -> Result<QFamily<T>> {
        let l = self.l() as i32;
        let s1 = |u: T| {
            T::lit(2.0) * u.powi(l - 2) * (T::lit(2.0) - u * u).powf(T::from_usize_lossy(l as usize) * T::lit(0.5) - T::lit(1.5))
        };
        // θ(u) = 2 arcsin(u/√2) avoids the cancellation in arccos(1 − u²)
        let theta = |u: T| T::lit(2.0) * (u * T::FRAC_1_SQRT_2()).min(T::one()).asin();
        let q = fit_adaptive(max_order, |u| self.d_r(r, theta(u)).conj() * s1(u))?;
        let q_tilde = fit_adaptive(max_order, |u| self.d_r(r, T::PI() - theta(u)) * s1(u))?;
        Ok(QFamily { q, q_tilde })
    }

    /// `C_l (hr)^{(1−l)/2} [e^{ihr − iπ(l−1)/4} ς(re₁) + e^{−ihr + iπ(l−1)/4} ς(−re₁)]`,
    /// without the factor `r^{l−1}`.
    pub fn main_unscaled(&self, r: T, h: T) -> Complex<T> {
        let x = h * r;
        let l = T::from_usize_lossy(self.l());
        let shift = T::PI() * (l - T::one()) * T::lit(0.25);
        let plus: Vec<T> = self.axis.iter().map(|&e| e * r).collect();
        let minus: Vec<T> = plus.iter().map(|&v| -v).collect();
        let bracket = cis(x - shift) * self.symbol.eval(&plus) + cis(shift - x) * self.symbol.eval(&minus);
        bracket * (self.constant() * x.powf((T::one() - l) * T::lit(0.5)))
    }

    /// Exact decomposition of `ξ(r,h)` with `M` terms at the far endpoint.
    pub fn xi_decompose(&self, r: T, h: T, m: usize) -> Result<XiDecomposition<T>> {
        let x = h * r;
        if !(x >= T::lit(MIN_HR)) {
            return Err(Error::OutOfRange { value: x.as_f64(), lo: MIN_HR, hi: f64::INFINITY });
        }
        if m == 0 {
            return Err(Error::InvalidArgument("M must be positive".into()));
        }
        let l = self.l();
        let fam = self.q_family(r, l.max(m))?;
        let n = l - 1;
        let e = cis(x);
        let ec = e.conj();
        let scale = r.powi(l as i32 - 1);

        let r0 = e * fam.q.r1_boundary(n, x).conj() + ec * fam.q_tilde.r1_boundary(n, x);
        let (i_q, i_qt) = fam.q.r1_integral_pair(&fam.q_tilde, n, x);
        let r1 = e * i_q.conj() + ec * i_qt;
        let r2 = -(e * fam.q.r2(m, x).conj() + ec * fam.q_tilde.r2(m, x));

        let main = self.main_unscaled(r, h);
        let partial = |amp: &AmplitudeData<T>| {
            let mut s = ComplexSum::new();
            for t in amp.main_terms(n, x) {
                s.add(t);
            }
            for t in amp.i2_terms(m, x) {
                s.add(-t);
            }
            s.value()
        };
        let boundary = e * partial(&fam.q).conj() + ec * partial(&fam.q_tilde) - main;

        Ok(XiDecomposition {
            direct: self.xi_direct(r, h),
            main: main * scale,
            r0: r0 * scale,
            r1: r1 * scale,
            r2: r2 * scale,
            boundary: boundary * scale,
            scale,
        })
    }

    /// Default far-endpoint order `⌊(l+1)/2⌋`.
    pub fn default_m(&self) -> usize {
        (self.l() + 1) / 2
    }

    /// `Γ(l/2)/(2(l−1)!) (hr)^{−l/2} [e^{ihr−iπl/4} conj(q^{(l−1)}(0)) + e^{−ihr+iπl/4} q̃^{(l−1)}(0)]`
    pub fn r0_closed_form(&self, fam: &QFamily<T>, r: T, h: T) -> Complex<T> {
        let x = h * r;
        let l = self.l();
        let lf = T::from_usize_lossy(l);
        let fact = (1..l).fold(T::one(), |a, k| a * T::from_usize_lossy(k));
        let k = gamma_real(lf * T::lit(0.5)) / (T::lit(2.0) * fact) * x.powf(-lf * T::lit(0.5));
        let quarter = T::PI() * lf * T::lit(0.25);
        let dq = fam.q.q_derivative(T::zero(), l - 1);
        let dqt = fam.q_tilde.q_derivative(T::zero(), l - 1);
        (cis(x - quarter) * dq.conj() + cis(quarter - x) * dqt) * k
    }

    /// `∫_0^∞ e^{itr} ψ(r) ξ(r,h) dr` and the integral of its main term
    /// `C_l h^{(1−l)/2} ∫ Ψ(r) r^{(l−1)/2} [e^{ihr−iπ(l−1)/4} σ(rE) + e^{−ihr+iπ(l−1)/4} σ(−rE)] dr`.
    pub fn i_psi(&self, profile: &Profile<T>, t: T, h: T) -> Result<PsiIntegral<T>> {
        Ok(self.i_psi_many(profile, t, &[h])?.remove(0))
    }

    /// [`i_psi`](Self::i_psi) for several `h` at once.
    ///
    /// The direct value is the same integral over the ball `|λ| ≤ r_max` in
    /// coordinates `λ = J(s, y)`: the transverse integral
    /// `A(s) = ∫ Ψ(|(s,y)|) ς(s,y) dy` does not depend on `h`, and
    /// `∫ e^{ihs} A(s) ds` is then a single Filon quadrature per `h`.
    pub fn i_psi_many(&self, profile: &Profile<T>, t: T, hs: &[T]) -> Result<Vec<PsiIntegral<T>>> {
        let l = self.l();
        let lf = T::from_usize_lossy(l);
        let n = self.symbol.space_dimension();
        profile.constant_c(0, n + lf * T::lit(0.5) - T::lit(2.0))?;
        let r_max = profile.truncation_radius(T::lit(TAIL_TOLERANCE), n);

        let filon = FilonLegendre::<T>::new(16);
        // the symbol may have complex singularities at distance 1/2 from
        // the real axis (the tanh factors of Plancherel densities)
        let half_panels = (r_max * T::lit(2.0)).ceil().to_usize().unwrap_or(1).max(1);
        let mut s_breaks = uniform_breaks(-r_max, r_max, 2 * half_panels);
        // A(s) has |s|-type terms from the radius |(s,y)|: grade towards 0
        let first = r_max / T::from_usize_lossy(half_panels);
        let mut g = first * T::lit(0.5);
        for _ in 0..40 {
            s_breaks.push(g);
            s_breaks.push(-g);
            g = g * T::lit(0.5);
        }
        let s_breaks = sorted_breaks(s_breaks);
        let s_nodes = filon.panel_nodes(&s_breaks);
        let transverse: Vec<Complex<T>> =
            s_nodes.par_iter().map(|&s| self.transverse(profile, t, s, r_max)).collect();

        let rule = GaussLegendre::<T>::new(12);
        let shift = T::PI() * (lf - T::one()) * T::lit(0.25);
        let s_max = r_max.sqrt();
        let out = hs
            .iter()
            .map(|&h| {
                let direct = filon.integrate_sampled(&s_breaks, h, &transverse);
                // main term with r = s² so that r^{(l−1)/2} dr is smooth at 0
                let freq = t.abs() + h;
                let count = (freq * r_max / T::PI()).ceil().to_usize().unwrap_or(1).max(8);
                let mut breaks: Vec<T> = (0..=count)
                    .map(|j| (r_max * T::from_usize_lossy(j) / T::from_usize_lossy(count)).sqrt())
                    .collect();
                breaks.extend(uniform_breaks(T::zero(), s_max, 16));
                let breaks = sorted_breaks(breaks);
                let main_integral = rule.integrate_panels(&breaks, |s| {
                    let r = s * s;
                    let plus: Vec<T> = self.axis.iter().map(|&e| e * r).collect();
                    let minus: Vec<T> = plus.iter().map(|&v| -v).collect();
                    let bracket = cis((t + h) * r - shift) * self.symbol.eval(&plus)
                        + cis((t - h) * r + shift) * self.symbol.eval(&minus);
                    bracket * (profile.value(r) * r.powf((lf - T::one()) * T::lit(0.5)) * T::lit(2.0) * s)
                });
                let main = main_integral * (self.constant() * h.powf((T::one() - lf) * T::lit(0.5)));
                PsiIntegral { direct, main }
            })
            .collect();
        Ok(out)
    }

    /// `∫_{|y| ≤ √(r_max² − s²)} e^{it|(s,y)|} ψ(|(s,y)|) ς(s,y) dy` over `y ∈ ℝ^{l−1}`,
    /// in polar form `y = ρω`.
    fn transverse(&self, profile: &Profile<T>, t: T, s: T, r_max: T) -> Complex<T> {
        let l = self.l();
        let y_max = (r_max * r_max - s * s).max(T::zero()).sqrt();
        if y_max == T::zero() {
            return Complex::new(T::zero(), T::zero());
        }
        // |(s,ρ)| varies on the scale |s| near ρ = 0
        let mut breaks = vec![T::zero(), y_max];
        let mut g = s.abs() * T::lit(0.125);
        while g < y_max.min(T::lit(2.0)) {
            breaks.push(g);
            g = g + g;
        }
        let width = if t == T::zero() { T::one() } else { (T::PI() / t.abs()).min(T::one()) };
        let count = (y_max / width).ceil().to_usize().unwrap_or(1).max(1);
        breaks.extend(uniform_breaks(T::zero(), y_max, count));
        let breaks = sorted_breaks(breaks);
        let rule = GaussLegendre::<T>::new(16);
        let mut point = vec![T::zero(); l];
        rule.integrate_panels(&breaks, |rho| {
            let radius = (s * s + rho * rho).sqrt();
            let weight = cis(t * radius) * (profile.value(radius) * rho.powi(l as i32 - 2));
            let mut acc = ComplexSum::new();
            for (omega, w) in &self.sphere {
                point[0] = s;
                for (p, &o) in point[1..].iter_mut().zip(omega) {
                    *p = rho * o;
                }
                acc.add(self.symbol.eval(&self.rotation.apply(&point)) * *w);
            }
            acc.value() * weight
        })
    }
}

fn sorted_breaks<T: Real>(mut v: Vec<T>) -> Vec<T> {
    v.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    v.dedup_by(|a, b| (*a - *b).abs() <= T::lit(1e-14) * (T::one() + b.abs()));
    v
}

/// Chebyshev model on `[0, √(7/4)]` starting at [`PROXY_DEGREE`] and doubling
/// until the trailing coefficients fall below `1e-13` of the largest.
fn fit_adaptive<T: Real>(max_order: usize, mut base: impl FnMut(T) -> Complex<T>) -> Result<AmplitudeData<T>> {
    let end = T::lit(1.75).sqrt();
    let mut degree = PROXY_DEGREE;
    loop {
        let raw = Chebyshev::fit(T::zero(), end, degree, &mut base);
        let tail = raw.tail_ratio(4);
        if tail <= T::lit(PROXY_TAIL) || degree >= MAX_PROXY_DEGREE || raw.coefficients()[0].norm() == T::zero() {
            return AmplitudeData::from_chebyshev(T::one(), 2, max_order, raw);
        }
        degree *= 2;
    }
}

/// Panels of `[0, π]` on which `x cos θ` advances by at most `π`, plus a
/// uniform minimum.
fn theta_breaks<T: Real>(x: T) -> Vec<T> {
    let count = (T::lit(2.0) * x.abs() / T::PI()).ceil().to_usize().unwrap_or(0);
    let mut breaks = uniform_breaks(T::zero(), T::PI(), 8);
    for j in 1..count {
        let c = T::one() - T::from_usize_lossy(j) * T::PI() / x.abs();
        if c > -T::one() {
            breaks.push(c.acos());
        }
    }
    breaks.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    breaks.dedup_by(|a, b| (*a - *b).abs() <= T::lit(1e-14));
    breaks
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn axis_rotations() {
        let id = rotate_to_axis(&[1.0_f64, 0.0, 0.0]).unwrap();
        assert_eq!(id, Rotation::identity(3));
        let quarter = rotate_to_axis(&[0.0_f64, 1.0]).unwrap();
        let back = quarter.apply_inverse(&[0.0, 1.0]);
        assert!((back[0] - 1.0).abs() < 1e-15 && back[1].abs() < 1e-15);
        assert_relative_eq!(quarter.determinant(), 1.0, max_relative = 1e-15);
        assert!(rotate_to_axis(&[1.0_f64, 1.0]).is_err());
    }

    #[test]
    fn d_r_examples() {
        let flat = ModelIntegral::new(Symbol::constant(3, Complex::new(1.0_f64, 0.0)), &[1.0, 0.0, 0.0]).unwrap();
        assert_relative_eq!(flat.d_r(1.3, 0.4).re, 2.0 * std::f64::consts::PI, max_relative = 1e-14);
        let lin = ModelIntegral::new(Symbol::<f64>::linear(2), &[1.0, 0.0]).unwrap();
        assert_relative_eq!(lin.d_r(1.5, 0.7).re, 3.0 * 0.7_f64.cos(), max_relative = 1e-14);
        let g4 = ModelIntegral::new(Symbol::<f64>::gaussian(4), &[0.0, 0.0, 0.6, 0.8]).unwrap();
        let expected = (-0.81_f64).exp() * sphere_area::<f64>(2);
        assert_relative_eq!(g4.d_r(0.9, 1.1).re, expected, max_relative = 1e-13);
        assert!(matches!(ModelIntegral::new(Symbol::<f64>::gaussian(1), &[1.0]), Err(Error::RankOne)));
    }

    #[test]
    fn sphere_area_values() {
        assert_relative_eq!(sphere_area::<f64>(0), 2.0, max_relative = 1e-14);
        assert_relative_eq!(sphere_area::<f64>(1), 2.0 * std::f64::consts::PI, max_relative = 1e-14);
        assert_relative_eq!(sphere_area::<f64>(2), 4.0 * std::f64::consts::PI, max_relative = 1e-14);
    }

    #[test]
    fn xi_at_zero_frequency_is_sphere_area() {
        let flat = ModelIntegral::new(Symbol::constant(3, Complex::new(1.0_f64, 0.0)), &[1.0, 0.0, 0.0]).unwrap();
        let v = flat.xi_direct(1.7, 0.0);
        assert_relative_eq!(v.re, 4.0 * std::f64::consts::PI * 1.7 * 1.7, max_relative = 1e-13);
    }

    #[test]
    fn small_hr_is_rejected() {
        let g = ModelIntegral::new(Symbol::<f64>::gaussian(2), &[1.0, 0.0]).unwrap();
        assert!(matches!(g.xi_decompose(0.5, 1.0, 1), Err(Error::OutOfRange { .. })));
    }
}
