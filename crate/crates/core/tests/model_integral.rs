use std::f64::consts::PI;

use num_complex::Complex;
use sympwave::model_integral::{rotate_to_axis, ModelIntegral, Symbol};
use sympwave::plancherel::CFunction;
use sympwave::root_data::RootDatum;
use sympwave::stationary_phase::k_n_at_zero;

type C = Complex<f64>;

fn gaussian(l: usize) -> ModelIntegral<f64> {
    let mut e = vec![0.0; l];
    e[0] = 1.0;
    ModelIntegral::new(Symbol::gaussian(l), &e).unwrap()
}

fn a2_plancherel() -> ModelIntegral<f64> {
    let cf = CFunction::new(RootDatum::preset("a2").unwrap()).unwrap();
    let e = [0.6, 0.8];
    ModelIntegral::new(Symbol::plancherel(cf), &e).unwrap()
}

/// `J₀` by its power series; adequate for `x ≤ 12`.
fn bessel_j0(x: f64) -> f64 {
    let q = -0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..80 {
        term *= q / (k as f64 * k as f64);
        sum += term;
    }
    sum
}

#[test]
fn l3_radial_closed_form_and_identity() {
    let m = gaussian(3);
    for &r in &[0.5, 1.0, 2.0] {
        for &h in &[10.0, 25.0, 50.0] {
            let sigma = (-r * r as f64).exp();
            let exact = 4.0 * PI * r * sigma * (h * r as f64).sin() / h;
            let d = m.xi_decompose(r, h, m.default_m()).unwrap();
            assert!((d.direct - C::new(exact, 0.0)).norm() <= 1e-8 * exact.abs(), "r={r} h={h}: {} vs {exact}", d.direct);
            let res = d.residual().norm();
            assert!(res <= 1e-6 * d.direct.norm() + 1e-9, "r={r} h={h}: residual {res:e}");
        }
    }
}

#[test]
fn l2_radial_matches_bessel() {
    let m = gaussian(2);
    for &(r, h) in &[(0.5, 3.0), (1.0, 7.5), (1.5, 4.0), (0.8, 12.0)] {
        let expected = 2.0 * PI * r * (-r * r as f64).exp() * bessel_j0(h * r);
        let v = m.xi_direct(r, h);
        assert!((v.re - expected).abs() <= 1e-9 * expected.abs().max(1e-3), "r={r} h={h}: {v} vs {expected}");
        assert!(v.im.abs() <= 1e-10 * v.norm());
    }
}

#[test]
fn identity_across_symbol_family() {
    let a2 = a2_plancherel();
    let e3 = [1.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0];
    let models = vec![
        gaussian(2),
        ModelIntegral::new(Symbol::norm_sq_gaussian(2), &[1.0, 0.0]).unwrap(),
        ModelIntegral::new(Symbol::norm_sq_gaussian(3), &e3).unwrap(),
        ModelIntegral::new(Symbol::anisotropic_gaussian(vec![1.0, 0.5, 0.25]), &e3).unwrap(),
        ModelIntegral::new(Symbol::anisotropic_gaussian(vec![1.0, 0.3]), &[0.6, -0.8]).unwrap(),
        a2,
    ];
    for m in &models {
        for &(r, h) in &[(0.7, 9.0), (1.6, 30.0), (3.0, 12.0)] {
            let d = m.xi_decompose(r, h, m.default_m()).unwrap();
            let res = d.residual().norm();
            assert!(
                res <= 1e-6 * d.direct.norm() + 1e-9,
                "{} r={r} h={h}: residual {res:e}, direct {}",
                m.symbol().name(),
                d.direct
            );
            assert!(d.boundary.norm() <= 1e-7 * (1.0 + d.direct.norm()), "{}: boundary {}", m.symbol().name(), d.boundary);
        }
    }
}

#[test]
fn q_derivatives_at_origin() {
    for l in [2usize, 3] {
        let m = gaussian(l);
        let r = 1.2;
        let fam = m.q_family(r, l).unwrap();
        for k in 0..l - 2 {
            assert!(fam.q.q_derivative(0.0, k).norm() < 1e-9);
        }
        let fact: f64 = (1..=l - 2).map(|k| k as f64).product();
        let expected = 2f64.powf((l as f64 - 1.0) / 2.0) * fact * m.d_r(r, 0.0).conj();
        let got = fam.q.q_derivative(0.0, l - 2);
        assert!((got - expected).norm() < 1e-9 * expected.norm(), "l={l}: {got} vs {expected}");
    }
}

#[test]
fn far_endpoint_terms_cancel() {
    let e3 = [1.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0];
    let models = [
        ModelIntegral::new(Symbol::anisotropic_gaussian(vec![1.0, 0.5, 0.25]), &e3).unwrap(),
        a2_plancherel(),
    ];
    for m in &models {
        let fam = m.q_family(1.4, 4).unwrap();
        let j = fam.q.q1_jet(1.0, 3);
        let jt = fam.q_tilde.q1_jet(1.0, 3);
        for k in 0..=3 {
            let sign = if k % 2 == 0 { -1.0 } else { 1.0 };
            let s = j.derivative(k).conj() * sign + jt.derivative(k);
            assert!(s.norm() < 1e-7, "{} m={k}: {s}", m.symbol().name());
        }
    }
}

#[test]
fn radial_symbol_has_equal_q_and_q_tilde() {
    let m = gaussian(3);
    let fam = m.q_family(0.9, 3).unwrap();
    for j in 0..=40 {
        let u = 2f64.sqrt() * j as f64 / 40.0;
        assert!((fam.q.q(u) - fam.q_tilde.q(u)).norm() < 1e-10);
    }
}

#[test]
fn r0_closed_form_matches_k_l() {
    for m in [gaussian(2), a2_plancherel()] {
        let l = m.symbol().dim();
        let (r, h) = (1.3, 17.0);
        let x = h * r;
        let fam = m.q_family(r, l).unwrap();
        let kl = k_n_at_zero(l, x, 2);
        let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
        let via_k = (C::from_polar(1.0, x) * (fam.q.q_derivative(0.0, l - 1) * kl).conj()
            + C::from_polar(1.0, -x) * fam.q_tilde.q_derivative(0.0, l - 1) * kl)
            * sign;
        let closed = m.r0_closed_form(&fam, r, h);
        assert!((via_k - closed).norm() <= 1e-10 * closed.norm().max(1e-12), "{via_k} vs {closed}");
        let d = m.xi_decompose(r, h, m.default_m()).unwrap();
        assert!((d.r0 / d.scale - closed).norm() <= 1e-10 * closed.norm().max(1e-12));
    }
}

#[test]
fn vanishing_order_propagates() {
    let m = ModelIntegral::new(Symbol::norm_sq_gaussian(3), &[0.0, 0.0, 1.0]).unwrap();
    let ratios: Vec<f64> = [0.2, 0.1, 0.05, 0.02, 0.01]
        .iter()
        .map(|&r: &f64| m.xi_direct(r, 3.0).norm() / r.powi(2 + 2))
        .collect();
    let max = ratios.iter().cloned().fold(0.0, f64::max);
    let min = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    assert!(max / min < 1.5, "{ratios:?}");
}

#[test]
fn random_axes_are_orthogonal() {
    let dirs = [
        vec![0.3, -0.4, 0.5, 0.71],
        vec![-0.8, 0.6],
        vec![0.0, -1.0, 0.0],
        vec![0.2672612419124244, 0.5345224838248488, 0.8017837257372732],
    ];
    for d in &dirs {
        let n: f64 = d.iter().map(|x| x * x).sum::<f64>().sqrt();
        let e: Vec<f64> = d.iter().map(|x| x / n).collect();
        let j = rotate_to_axis(&e).unwrap();
        assert!(j.orthogonality_error() <= 1e-14);
        let back = j.apply_inverse(&e);
        assert!((back[0] - 1.0).abs() < 1e-14);
        assert!((j.determinant() - 1.0).abs() < 1e-13);
    }
}

#[test]
fn constant_recovery() {
    // l = 3: the sinc closed form has no remainder
    let m3 = gaussian(3);
    let m2 = gaussian(2);
    for (m, hs) in [(&m3, [10.0, 25.0, 50.0, 75.0]), (&m2, [400.0, 550.0, 700.0, 850.0])] {
        let l = m.symbol().dim() as f64;
        let r = 1.1;
        let mut num = 0.0;
        let mut den = 0.0;
        for &h in &hs {
            let xi = m.xi_direct(r, h);
            let shape = m.main_unscaled(r, h) / m.constant() * r.powf(l - 1.0);
            num += (xi * shape.conj()).re;
            den += shape.norm_sqr();
        }
        let fitted = num / den;
        let expected = (2.0 * PI).powf((l - 1.0) / 2.0);
        assert!((fitted / expected - 1.0).abs() < 1e-3, "l={l}: {fitted} vs {expected}");
    }
}

mod psi {
    use super::*;
    use sympwave::profiles::Profile;
    use sympwave::quadrature::GaussLegendre;

    #[test]
    fn matches_polar_oracle() {
        let m = ModelIntegral::new(Symbol::anisotropic_gaussian(vec![1.0, 0.4]), &[0.6, 0.8]).unwrap();
        let psi = Profile::exponential(1.0).unwrap();
        let (t, h) = (0.7, 6.0);
        let got = m.i_psi(&psi, t, h).unwrap();
        // ∫ e^{itr} ψ(r) ξ(r,h) dr with the Gaussian negligible beyond r = 9
        let rule = GaussLegendre::new(20);
        let breaks: Vec<f64> = (0..=36).map(|k| 0.25 * k as f64).collect();
        let oracle = rule.integrate_panels(&breaks, |r| C::from_polar(1.0, t * r) * psi.value(r) * m.xi_direct(r, h));
        assert!((got.direct - oracle).norm() <= 1e-9 * oracle.norm(), "{} vs {oracle}", got.direct);
    }

    #[test]
    fn a2_remainder_and_decay() {
        let cf = CFunction::new(RootDatum::preset("a2").unwrap()).unwrap();
        let m = ModelIntegral::new(Symbol::plancherel(cf), &[0.6, 0.8]).unwrap();
        let psi = Profile::exponential(1.0).unwrap();
        let hs = [10.0, 20.0, 40.0, 80.0, 160.0, 320.0];
        let vals = m.i_psi_many(&psi, 0.0, &hs).unwrap();
        let scaled: Vec<f64> = hs[..5].iter().zip(&vals).map(|(&h, v)| (v.direct - v.main).norm() * h).collect();
        let sup = scaled.iter().cloned().fold(0.0, f64::max);
        assert!(sup.is_finite() && sup < 1.0, "{scaled:?}");
        // log-log slope of |direct| over h in [20, 320]
        let pts: Vec<(f64, f64)> = hs[1..].iter().zip(&vals[1..]).map(|(&h, v)| (h.ln(), v.direct.norm().ln())).collect();
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let slope = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>() / pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
        assert!(slope <= -0.4, "slope {slope}");
    }

    #[test]
    fn zero_symbol_gives_zero() {
        let m = ModelIntegral::new(Symbol::<f64>::zero(2), &[1.0, 0.0]).unwrap();
        let v = m.i_psi(&Profile::bump(2.0).unwrap(), 0.3, 15.0).unwrap();
        assert_eq!(v.direct, C::new(0.0, 0.0));
        assert_eq!(v.main, C::new(0.0, 0.0));
    }

    #[test]
    fn divergent_profile_is_rejected() {
        let cf = CFunction::new(RootDatum::preset("a2").unwrap()).unwrap();
        let m = ModelIntegral::new(Symbol::plancherel(cf), &[1.0, 0.0]).unwrap();
        let err = m.i_psi(&Profile::rational(3.0).unwrap(), 0.0, 10.0).unwrap_err();
        assert!(matches!(err, sympwave::Error::Divergent { .. }));
    }
}
