//! Rank-one spherical functions, the radial density `ξ(R, r)`, the shifted
//! wave kernel `k_t(R) = ∫_0^∞ e^{itr} ψ(r) ξ(R, r) dr` and the Kunze–Stein
//! dispersive integral.
//!
//! `φ_λ(R)` has three evaluation routes:
//!
//! * `R < 2`: the `K`-integral, reduced to one angle for real hyperbolic
//!   spaces and to Koornwinder's double integral when `m_2α > 0`;
//! * `R ≥ 2`, `|λ| ≥ 0.01`: `2 Re(c(λ) Φ_λ(R))` with the Harish-Chandra
//!   function `Φ_λ` summed as a hypergeometric series in `1/cosh² R`;
//! * `R ≥ 2`, `|λ| < 0.01`: the radial ODE continued from `R = 2`, where the
//!   two-term formula would cancel.
//!
//! For `R ≥ 2` the kernel uses `|c(λ)|^{-2} c(±λ) = 1/c(∓λ)`, which turns the
//! integral into two Filon integrals with pure phases `e^{i(t ± L)r}`,
//! `L = ln(2 cosh R)`, and amplitudes that do not oscillate in `R`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::plancherel::CFunction;
use crate::profiles::Profile;
use crate::quadrature::{FilonLegendre, GaussLegendre};
use crate::root_data::RootDatum;
use crate::scalar::{cis, ComplexSum, Real};
use crate::special_gamma::gamma_real;

/// Radius from which the series route is used.
pub const SERIES_RADIUS: f64 = 2.0;
/// Below this `|λ|` the series route is replaced by the ODE.
pub const SMALL_LAMBDA: f64 = 1e-2;
/// Profile tail treated as zero in the spectral integral.
pub const PROFILE_TAIL: f64 = 1e-14;
/// Cap on the spectral truncation radius, reached only by slowly decaying
/// profiles.
pub const MAX_SPECTRAL_RADIUS: f64 = 400.0;
/// Dispersive integrand cut-off relative to its maximum.
pub const DISPERSIVE_TAIL: f64 = 1e-16;

const FILON_ORDER: usize = 16;
const SPECTRAL_PANEL: f64 = 0.5;
const ANGLE_RULE: usize = 16;
const RADIAL_RULE: usize = 8;
const RADIAL_PANEL: f64 = 0.5;
const ODE_STEP: f64 = 2.5e-3;
const MAX_DISPERSIVE_RADIUS: f64 = 5000.0;

/// A rank-one symmetric space: one reduced root `α` of unit length with
/// multiplicities `m_α`, `m_2α`.
#[derive(Clone, Debug)]
pub struct RankOneGeometry<T: Real> {
    cfun: CFunction<T>,
    m_alpha: u32,
    m_2alpha: u32,
    rho: T,
    // 1 / ∫ weight, so that φ_λ(0) = 1
    norm: T,
    angle: GaussLegendre<T>,
    radial: GaussLegendre<T>,
    filon: FilonLegendre<T>,
}

/// `k_t` at Cartan radius `R`, normalized with `C_G = 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KernelSample<T> {
    pub t: T,
    pub r: T,
    pub value: Complex<T>,
}

impl<T: Real> RankOneGeometry<T> {
    pub fn new(datum: RootDatum<T>) -> Result<Self> {
        if datum.rank() != 1 || datum.d() != 1 {
            return Err(Error::InvalidRootDatum(format!(
                "rank-one geometry needs one root on a line, `{}` has rank {} with {} roots",
                datum.name(),
                datum.rank(),
                datum.d()
            )));
        }
        let root = datum.roots()[0].clone();
        if (root.vector[0].abs() - T::one()).abs() > T::lit(1e-12) {
            return Err(Error::InvalidRootDatum("rank-one geometry expects a unit root".into()));
        }
        let rho = datum.rho()[0].abs();
        let (ma, m2a) = (root.m_alpha, root.m_2alpha);
        if ma == 0 {
            return Err(Error::InvalidRootDatum("m_alpha must be positive".into()));
        }
        let half = T::lit(0.5);
        let f = |m: u32| T::lit(f64::from(m));
        // ∫_0^π sin^k = √π Γ((k+1)/2) / Γ(k/2 + 1)
        let sine_integral = |k: T| T::PI().sqrt() * gamma_real((k + T::one()) * half) / gamma_real(k * half + T::one());
        let weight = if m2a == 0 {
            sine_integral(f(ma) - T::one())
        } else {
            // ∫_0^{π/2} cos^a sin^b = Γ((a+1)/2) Γ((b+1)/2) / (2 Γ((a+b)/2 + 1))
            let a = f(ma) - T::one();
            let b = f(m2a);
            let beta = gamma_real((a + T::one()) * half) * gamma_real((b + T::one()) * half)
                / (T::lit(2.0) * gamma_real((a + b) * half + T::one()));
            beta * sine_integral(f(m2a) - T::one())
        };
        Ok(Self {
            cfun: CFunction::new(datum)?,
            m_alpha: ma,
            m_2alpha: m2a,
            rho,
            norm: weight.recip(),
            angle: GaussLegendre::new(ANGLE_RULE),
            radial: GaussLegendre::new(RADIAL_RULE),
            filon: FilonLegendre::new(FILON_ORDER),
        })
    }

    pub fn preset(name: &str) -> Result<Self> {
        Self::new(RootDatum::preset(name)?)
    }

    pub fn datum(&self) -> &RootDatum<T> {
        self.cfun.datum()
    }

    pub fn c_function(&self) -> &CFunction<T> {
        &self.cfun
    }

    /// Dimension of the symmetric space.
    pub fn n(&self) -> usize {
        self.datum().n()
    }

    /// `ρ(1)`.
    pub fn rho(&self) -> T {
        self.rho
    }

    pub fn d(&self) -> usize {
        1
    }

    /// `ν = 2d + l = 3`.
    pub fn nu(&self) -> usize {
        self.datum().nu()
    }

    pub fn multiplicities(&self) -> (u32, u32) {
        (self.m_alpha, self.m_2alpha)
    }

    /// Jacobi parameters `(a, b) = ((m_α + m_2α − 1)/2, (m_2α − 1)/2)`.
    pub fn jacobi_parameters(&self) -> (T, T) {
        let ma = T::lit(f64::from(self.m_alpha));
        let m2a = T::lit(f64::from(self.m_2alpha));
        let half = T::lit(0.5);
        ((ma + m2a - T::one()) * half, (m2a - T::one()) * half)
    }

    /// Spherical function `φ_λ(R)`.
    pub fn phi_rank1(&self, lambda: T, r: T) -> T {
        assert!(r >= T::zero(), "Cartan radius must be nonnegative");
        self.phi_scaled(lambda, r) * (-self.rho * r).exp()
    }

    /// `e^{ρR} φ_λ(R)`, which stays of moderate size for large `R`.
    pub fn phi_scaled(&self, lambda: T, r: T) -> T {
        let lambda = lambda.abs();
        let r_series = T::lit(SERIES_RADIUS);
        if r == T::zero() {
            return T::one();
        }
        if r < r_series {
            return self.phi_integral(lambda, r).0 * (self.rho * r).exp();
        }
        if lambda < T::lit(SMALL_LAMBDA) {
            let mut march = RadialOde::start(self, lambda);
            return march.advance_to(self, r);
        }
        self.phi_series_scaled(lambda, r)
    }

    /// Quadrature for the `K`-integral at radius `R`: triples `(w, ℓ, ℓ')`
    /// with `φ_λ(R) ≈ Σ w e^{−(ρ+iλ)ℓ}` and `ℓ' = ∂_R ℓ`. `ℓ` is the log of the
    /// base and runs over `[−R, R]`; `frequency` bounds the `λ` the rule must
    /// resolve.
    fn k_nodes(&self, r: T, frequency: T) -> Vec<(T, T, T)> {
        let two = T::lit(2.0);
        let half = T::lit(0.5);
        let (er, emr) = (r.exp(), (-r).exp());
        // the integrand peaks at ψ ≈ 2e^{-R} and oscillates like λℓ
        let breaks = graded_breaks(two * emr, T::PI(), T::PI() / T::lit(8.0).max((frequency * r).ceil()));
        let mut out = Vec::new();
        if self.m_2alpha == 0 {
            let m = (self.m_alpha - 1) as i32;
            for w in breaks.windows(2) {
                for (psi, wt) in self.angle.mapped(w[0], w[1]) {
                    let (s, c) = (psi * half).sin_cos();
                    let b = er * s * s + emr * c * c;
                    let db = er * s * s - emr * c * c;
                    out.push((wt * psi.sin().powi(m) * self.norm, b.ln(), db / b));
                }
            }
            return out;
        }
        // Koornwinder: radius sin φ on [0, π/2] and angle ψ measured from
        // the minimum of |cosh R − sin φ e^{iψ} sinh R|
        let (ch, sh) = (r.cosh(), r.sinh());
        let ma = (self.m_alpha - 1) as i32;
        let m2 = self.m_2alpha as i32;
        let phi_breaks = graded_breaks(emr, T::FRAC_PI_2(), T::FRAC_PI_2() / T::lit(8.0));
        for pw in phi_breaks.windows(2) {
            // reversed so that the grading sits at φ = π/2
            let (pa, pb) = (T::FRAC_PI_2() - pw[1], T::FRAC_PI_2() - pw[0]);
            for (phi, wphi) in self.angle.mapped(pa, pb) {
                let (rad, cphi) = phi.sin_cos();
                let one_minus_rad = two * (T::FRAC_PI_4() - phi * half).sin().powi(2);
                let wphi = wphi * cphi.powi(ma) * rad.powi(m2) * self.norm;
                for w in breaks.windows(2) {
                    for (psi, wpsi) in self.angle.mapped(w[0], w[1]) {
                        let s = (psi * half).sin();
                        let (spsi, cpsi) = psi.sin_cos();
                        // 1 ∓ rad·cos ψ without cancellation
                        let minus = one_minus_rad + rad * two * s * s;
                        let plus = T::one() + rad * cpsi;
                        let x = (er * minus + emr * plus) * half;
                        let dx = (er * minus - emr * plus) * half;
                        let y = rad * spsi * sh;
                        let dy = rad * spsi * ch;
                        let q = x * x + y * y;
                        let dq = two * (x * dx + y * dy);
                        out.push((wphi * wpsi * spsi.powi(m2 - 1), q.ln() * half, dq / (q + q)));
                    }
                }
            }
        }
        out
    }

    /// `φ_λ(R)` and `∂_R φ_λ(R)` from the `K`-integral. Accurate for `R`
    /// up to a few units.
    fn phi_integral(&self, lambda: T, r: T) -> (T, T) {
        let expo = Complex::new(-self.rho, -lambda);
        let mut val = ComplexSum::new();
        let mut der = ComplexSum::new();
        for (w, ell, dell) in self.k_nodes(r, lambda) {
            let f = (expo * ell).exp() * w;
            val.add(f);
            der.add(f * expo * dell);
        }
        let (v, d) = (val.value(), der.value());
        debug_assert!(
            v.im.abs() <= T::lit(1e-10).max(T::lit(1e3) * T::epsilon()) * (T::one() + v.re.abs()),
            "spherical function has imaginary part {:e}",
            v.im
        );
        (v.re, d.re)
    }

    /// `2 Re(c(λ) Φ_λ(R)) e^{ρR}` for `λ > 0`.
    fn phi_series_scaled(&self, lambda: T, r: T) -> T {
        let c = self.c_value(lambda);
        let (ell, amp) = self.harish_chandra(lambda, r);
        (c * cis(lambda * ell) * amp).re * T::lit(2.0)
    }

    fn c_value(&self, lambda: T) -> Complex<T> {
        self.cfun
            .c_function(&[Complex::new(lambda, T::zero())])
            .finite()
            .expect("c-function is finite off λ = 0")
    }

    /// `L = ln(2 cosh R)` and `e^{ρR} e^{−ρL} F(λ)`, so that
    /// `e^{ρR} Φ_λ(R) = e^{iλL} · amplitude`.
    fn harish_chandra(&self, lambda: T, r: T) -> (T, Complex<T>) {
        let q = (-(r + r)).exp();
        let ell = r + q.ln_1p();
        let z = T::lit(4.0) * q / ((T::one() + q) * (T::one() + q));
        let (a, b) = self.jacobi_parameters();
        let half = T::lit(0.5);
        let il = Complex::new(T::zero(), lambda);
        let p1 = (Complex::new(self.rho, T::zero()) - il) * half;
        let p2 = (Complex::new(a - b + T::one(), T::zero()) - il) * half;
        let p3 = Complex::new(T::one(), T::zero()) - il;
        let f = hypergeometric(p1, p2, p3, z);
        (ell, f * (-self.rho * q.ln_1p()).exp())
    }

    /// `ξ(R, r) = 2 φ_r(R) |c(r)|^{-2}`.
    pub fn xi_density(&self, r_cartan: T, r: T) -> T {
        assert!(r > T::zero(), "spectral radius must be positive");
        T::lit(2.0) * self.phi_rank1(r, r_cartan) * self.cfun.density(&[r])
    }

    /// `k_t(R)`. Fails if `C(ψ, 0, n−1)` diverges.
    pub fn kernel(&self, profile: &Profile<T>, t: T, r: T) -> Result<KernelSample<T>> {
        Ok(self.kernel_many(profile, &[t], r)?.remove(0))
    }

    /// `k_t(R)` for several `t`, sharing the amplitude samples.
    pub fn kernel_many(&self, profile: &Profile<T>, ts: &[T], r: T) -> Result<Vec<KernelSample<T>>> {
        assert!(r >= T::zero(), "Cartan radius must be nonnegative");
        let sampler = self.sampler(profile)?;
        let parts = sampler.scaled_parts(self, r);
        let damp = (-self.rho * r).exp();
        Ok(ts
            .iter()
            .map(|&t| KernelSample {
                t,
                r,
                value: sampler.integrate(self, &parts, t) * damp,
            })
            .collect())
    }

    /// `e^{ρR} · k`, the kernel of the distinguished Laplacian.
    pub fn distinguished(&self, k: &KernelSample<T>) -> Complex<T> {
        k.value * (self.rho * k.r).exp()
    }

    /// `sinh^{m_α}(R) sinh^{m_2α}(2R)`.
    pub fn cartan_weight(&self, r: T) -> T {
        assert!(r >= T::zero(), "Cartan radius must be nonnegative");
        r.sinh().powi(self.m_alpha as i32) * (r + r).sinh().powi(self.m_2alpha as i32)
    }

    /// `e^{−2ρR}` times [`cartan_weight`](Self::cartan_weight).
    fn cartan_weight_scaled(&self, r: T) -> T {
        let half = T::lit(0.5);
        let a = (-(-(r + r)).exp_m1()) * half;
        let b = (-(-(T::lit(4.0) * r)).exp_m1()) * half;
        a.powi(self.m_alpha as i32) * b.powi(self.m_2alpha as i32)
    }

    /// `{∫_0^∞ |k_t(R)|^{p/2} φ_0(R) D(R) dR}^{2/p}` for `p > 2`.
    pub fn dispersive_bound(&self, profile: &Profile<T>, t: T, p: T) -> Result<T> {
        if !(p > T::lit(2.0)) || !p.is_finite() {
            return Err(Error::OutOfRange {
                value: p.as_f64(),
                lo: 2.0,
                hi: f64::INFINITY,
            });
        }
        let sampler = self.sampler(profile)?;
        if matches!(profile, Profile::Zero) {
            return Ok(T::zero());
        }
        let half_p = p * T::lit(0.5);
        // |k|^{p/2} φ_0 D = |e^{ρR}k|^{p/2} (e^{ρR}φ_0) (e^{−2ρR}D) e^{ρR(1 − p/2)}
        let decay = self.rho * (T::one() - half_p);
        let width = T::lit(RADIAL_PANEL);
        let series_start = T::lit(SERIES_RADIUS);
        let mut ode: Option<RadialOde<T>> = None;
        let mut total = T::zero();
        let mut peak = T::zero();
        let mut a = T::zero();
        loop {
            let b = a + width;
            let mut panel = T::zero();
            let mut panel_peak = T::zero();
            for (rr, w) in self.radial.mapped(a, b) {
                let k = sampler.integrate(self, &sampler.scaled_parts(self, rr), t).norm();
                let phi0 = if rr < series_start {
                    self.phi_scaled(T::zero(), rr)
                } else {
                    ode.get_or_insert_with(|| RadialOde::start(self, T::zero())).advance_to(self, rr)
                };
                let f = k.powf(half_p) * phi0 * self.cartan_weight_scaled(rr) * (decay * rr).exp();
                panel = panel + w * f;
                panel_peak = panel_peak.max(f);
            }
            total = total + panel;
            peak = peak.max(panel_peak);
            a = b;
            let past_start = a >= series_start;
            if (past_start && panel_peak <= T::lit(DISPERSIVE_TAIL) * peak) || a >= T::lit(MAX_DISPERSIVE_RADIUS) {
                break;
            }
        }
        Ok(total.powf(p.recip() * T::lit(2.0)))
    }

    fn sampler(&self, profile: &Profile<T>) -> Result<Sampler<T>> {
        let s = T::from_usize_lossy(self.n() - 1);
        profile.constant_c(0, s)?;
        let r_max = profile
            .truncation_radius(T::lit(PROFILE_TAIL), s)
            .min(T::lit(MAX_SPECTRAL_RADIUS));
        // breaks on exact multiples of the panel width keep the Filon phases exact
        let width = T::lit(SPECTRAL_PANEL);
        let panels = (r_max / width).ceil().to_usize().unwrap_or(0);
        let breaks: Vec<T> = (0..=panels).map(|j| width * T::from_usize_lossy(j)).collect();
        let nodes = self.filon.panel_nodes(&breaks);
        let psi: Vec<T> = nodes.iter().map(|&r| profile.value(r)).collect();
        let spectral: Vec<Complex<T>> = nodes
            .iter()
            .zip(&psi)
            .map(|(&r, &p)| Complex::new(T::lit(2.0) * p * self.cfun.density(&[r]), T::zero()))
            .collect();
        // 1/c(−r) and 1/c(r): density·c(±r) with the pole at 0 cancelled
        let inv_c: Vec<Complex<T>> = nodes.iter().map(|&r| self.c_value(r).inv()).collect();
        Ok(Sampler { breaks, nodes, psi, spectral, inv_c, r_max })
    }
}

/// Profile and Plancherel data at the Filon nodes of the spectral integral.
struct Sampler<T> {
    breaks: Vec<T>,
    nodes: Vec<T>,
    psi: Vec<T>,
    // 2ψ(r)|c(r)|^{-2}
    spectral: Vec<Complex<T>>,
    inv_c: Vec<Complex<T>>,
    r_max: T,
}

/// `e^{ρR}k_t(R)` as a sum of Filon integrals `w ∫ e^{i(t + shift)r} A(r) dr`.
enum ScaledParts<T> {
    /// `R < 2`: the `K`-integral taken outside, so every term shares the
    /// amplitude `2ψ|c|^{-2}` and `φ` is never sampled in `r`. Noise in
    /// sampled `φ` values would not oscillate and would not decay in `t`.
    Angular(Vec<(T, T)>),
    /// `R ≥ 2`: the two Harish-Chandra terms with phase shifts `±L`.
    Series { ell: T, plus: Vec<Complex<T>>, minus: Vec<Complex<T>> },
}

impl<T: Real> Sampler<T> {
    fn scaled_parts(&self, g: &RankOneGeometry<T>, r: T) -> ScaledParts<T> {
        let two = T::lit(2.0);
        if r < T::lit(SERIES_RADIUS) {
            return ScaledParts::Angular(self.collapse(g, r));
        }
        let mut ell = T::zero();
        let mut plus = Vec::with_capacity(self.nodes.len());
        let mut minus = Vec::with_capacity(self.nodes.len());
        for ((&x, &p), &ic) in self.nodes.iter().zip(&self.psi).zip(&self.inv_c) {
            let (l, a_plus) = g.harish_chandra(x, r);
            let (_, a_minus) = g.harish_chandra(-x, r);
            ell = l;
            // 1/c(−r) = conj(1/c(r)) for real r
            plus.push(a_plus * ic.conj() * (two * p));
            minus.push(a_minus * ic * (two * p));
        }
        ScaledParts::Series { ell, plus, minus }
    }

    /// Pushes the `K`-measure `w e^{−ρℓ}` forward to `ℓ ∈ [−R, R]` and
    /// replaces it by weights at Chebyshev points, exact for polynomials of
    /// degree below their count. `G(t − ℓ)` is band limited by `r_max`, so
    /// about `1.4 R r_max` points resolve it.
    fn collapse(&self, g: &RankOneGeometry<T>, r: T) -> Vec<(T, T)> {
        let m = (T::lit(1.4) * r * self.r_max).ceil().to_usize().unwrap_or(0) + 30;
        let pts: Vec<T> = (0..m)
            .map(|j| r * (T::PI() * T::from_usize_lossy(2 * j + 1) / T::from_usize_lossy(2 * m)).cos())
            .collect();
        let bary: Vec<T> = (0..m)
            .map(|j| {
                let s = (T::PI() * T::from_usize_lossy(2 * j + 1) / T::from_usize_lossy(2 * m)).sin();
                if j % 2 == 0 { s } else { -s }
            })
            .collect();
        let lift = (g.rho * r).exp();
        let mut moments = vec![T::zero(); m];
        let mut terms = vec![T::zero(); m];
        for (w, ell, _) in g.k_nodes(r, self.r_max) {
            let w = w * (-g.rho * ell).exp() * lift;
            if let Some(j) = pts.iter().position(|&x| x == ell) {
                moments[j] = moments[j] + w;
                continue;
            }
            let mut denom = T::zero();
            for ((slot, &x), &b) in terms.iter_mut().zip(&pts).zip(&bary) {
                *slot = b / (ell - x);
                denom = denom + *slot;
            }
            for (mj, &tj) in moments.iter_mut().zip(&terms) {
                *mj = *mj + w * tj / denom;
            }
        }
        pts.into_iter().map(|x| -x).zip(moments).collect()
    }

    fn integrate(&self, g: &RankOneGeometry<T>, parts: &ScaledParts<T>, t: T) -> Complex<T> {
        let mut acc = ComplexSum::new();
        match parts {
            ScaledParts::Angular(terms) => {
                for &(shift, w) in terms {
                    acc.add(g.filon.integrate_sampled(&self.breaks, t + shift, &self.spectral) * w);
                }
            }
            ScaledParts::Series { ell, plus, minus } => {
                acc.add(g.filon.integrate_sampled(&self.breaks, t + *ell, plus));
                acc.add(g.filon.integrate_sampled(&self.breaks, t - *ell, minus));
            }
        }
        acc.value()
    }
}

/// RK4 march of `u = e^{ρR}φ_λ(R)` along
/// `u'' + (A − 2ρ)u' + (λ² + 2ρ² − Aρ)u = 0`, `A = m_α coth R + 2m_2α coth 2R`,
/// started from the integral route at `R = 2`.
struct RadialOde<T> {
    lambda: T,
    r: T,
    u: T,
    du: T,
}

impl<T: Real> RadialOde<T> {
    fn start(g: &RankOneGeometry<T>, lambda: T) -> Self {
        let r0 = T::lit(SERIES_RADIUS);
        let (v, dv) = g.phi_integral(lambda, r0);
        let e = (g.rho * r0).exp();
        Self { lambda, r: r0, u: v * e, du: (dv + g.rho * v) * e }
    }

    fn rhs(&self, g: &RankOneGeometry<T>, r: T, u: T, du: T) -> T {
        let ma = T::lit(f64::from(g.m_alpha));
        let m2a = T::lit(f64::from(g.m_2alpha));
        let a = ma / r.tanh() + T::lit(2.0) * m2a / (r + r).tanh();
        let rho = g.rho;
        -(a - rho - rho) * du - (self.lambda * self.lambda + T::lit(2.0) * rho * rho - a * rho) * u
    }

    fn advance_to(&mut self, g: &RankOneGeometry<T>, target: T) -> T {
        assert!(target >= self.r, "radial ODE only marches outward");
        let span = target - self.r;
        let steps = (span / T::lit(ODE_STEP)).ceil().to_usize().unwrap_or(0);
        if steps == 0 {
            return self.u + self.du * span;
        }
        let h = span / T::from_usize_lossy(steps);
        let half = h * T::lit(0.5);
        let six = T::lit(6.0);
        for _ in 0..steps {
            let (r, u, du) = (self.r, self.u, self.du);
            let k1u = du;
            let k1v = self.rhs(g, r, u, du);
            let k2u = du + half * k1v;
            let k2v = self.rhs(g, r + half, u + half * k1u, du + half * k1v);
            let k3u = du + half * k2v;
            let k3v = self.rhs(g, r + half, u + half * k2u, du + half * k2v);
            let k4u = du + h * k3v;
            let k4v = self.rhs(g, r + h, u + h * k3u, du + h * k3v);
            self.u = u + h / six * (k1u + T::lit(2.0) * (k2u + k3u) + k4u);
            self.du = du + h / six * (k1v + T::lit(2.0) * (k2v + k3v) + k4v);
            self.r = r + h;
        }
        self.r = target;
        self.u
    }
}

/// `₂F₁(a, b; c; z)` by its power series, for `0 ≤ z` well inside the unit
/// disc.
fn hypergeometric<T: Real>(a: Complex<T>, b: Complex<T>, c: Complex<T>, z: T) -> Complex<T> {
    let mut term = Complex::new(T::one(), T::zero());
    let mut acc = ComplexSum::new();
    acc.add(term);
    for k in 0..2000 {
        let kf = T::from_usize_lossy(k);
        term = term * (a + kf) * (b + kf) / ((c + kf) * (kf + T::one())) * z;
        acc.add(term);
        if term.norm() <= T::epsilon() * T::lit(0.1) * acc.value().norm() && k > 1 {
            break;
        }
    }
    acc.value()
}

/// Breaks on `[0, end]` refined geometrically towards 0 down to `scale/4`,
/// then split so no panel is wider than `max_width`.
fn graded_breaks<T: Real>(scale: T, end: T, max_width: T) -> Vec<T> {
    let mut pts = vec![T::zero()];
    let mut x = scale * T::lit(0.25);
    while x < end {
        pts.push(x);
        x = x + x;
    }
    pts.push(end);
    let mut out = vec![T::zero()];
    for w in pts.windows(2) {
        let n = ((w[1] - w[0]) / max_width).ceil().to_usize().unwrap_or(1).max(1);
        for j in 1..=n {
            out.push(w[0] + (w[1] - w[0]) * T::from_usize_lossy(j) / T::from_usize_lossy(n));
        }
    }
    out
}
