use num_complex::Complex;
use proptest::prelude::*;
use sympwave::plancherel::CFunction;
use sympwave::root_data::{RootDatum, PRESETS};
use sympwave::special_gamma::{gamma, log_gamma};

type C = Complex<f64>;

/// Stirling series with Bernoulli terms through `B_16`, shifted up by the
/// recurrence until `Re z ≥ 15`. Independent of the crate's Lanczos code.
fn stirling_log_gamma(mut z: C) -> C {
    let mut shift = C::new(0.0, 0.0);
    while z.re < 15.0 {
        shift += z.ln();
        z += 1.0;
    }
    let b = [
        1.0 / 6.0,
        -1.0 / 30.0,
        1.0 / 42.0,
        -1.0 / 30.0,
        5.0 / 66.0,
        -691.0 / 2730.0,
        7.0 / 6.0,
        -3617.0 / 510.0,
    ];
    let mut s = (z - 0.5) * z.ln() - z + 0.5 * (2.0 * std::f64::consts::PI).ln();
    for (k, &bk) in b.iter().enumerate() {
        let n = 2.0 * (k as f64 + 1.0);
        s += bk / (n * (n - 1.0) * z.powf(n - 1.0));
    }
    s - shift
}

fn away_from_poles() -> impl Strategy<Value = C> {
    (-6.0f64..12.0, -12.0f64..12.0)
        .prop_filter("near a pole", |&(re, im)| im.abs() > 0.05 || (re > 0.05 && re.fract().abs() > 0.0))
        .prop_filter("near a nonpositive integer", |&(re, im)| {
            im.abs() > 0.05 || (re - re.round()).abs() > 0.05 || re > 0.5
        })
        .prop_map(|(re, im)| C::new(re, im))
}

proptest! {
    #[test]
    fn gamma_recurrence(z in away_from_poles()) {
        let g = gamma(z).unwrap();
        let g1 = gamma(z + 1.0).unwrap();
        prop_assert!((g1 - z * g).norm() <= 1e-12 * g1.norm());
    }

    #[test]
    fn gamma_conjugation(z in away_from_poles()) {
        let a = gamma(z.conj()).unwrap();
        let b = gamma(z).unwrap().conj();
        prop_assert!((a - b).norm() <= 1e-13 * b.norm());
    }

    #[test]
    fn log_gamma_matches_stirling(re in 0.1f64..30.0, im in -30.0f64..30.0) {
        let z = C::new(re, im);
        let ours = log_gamma(z).unwrap();
        let oracle = stirling_log_gamma(z);
        // equal modulo 2πi; compare real parts and the phase
        let d = ours - oracle;
        let wrapped = d.im - (d.im / (2.0 * std::f64::consts::PI)).round() * 2.0 * std::f64::consts::PI;
        prop_assert!(d.re.abs() <= 1e-12 * (1.0 + oracle.re.abs()), "{ours} vs {oracle}");
        prop_assert!(wrapped.abs() <= 1e-11 * (1.0 + oracle.im.abs()), "{ours} vs {oracle}");
    }

    #[test]
    fn rho_is_linear(a in -5.0f64..5.0, b in -5.0f64..5.0, x in -3.0f64..3.0, y in -3.0f64..3.0) {
        let a2 = RootDatum::<f64>::preset("a2").unwrap();
        let h = [a * x + b * y, a * y - b * x];
        let lhs = a2.rho_of(&h);
        let rhs = a * a2.rho_of(&[x, y]) + b * a2.rho_of(&[y, -x]);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs()));
    }

    #[test]
    fn density_is_even_and_weyl_invariant(x in -4.0f64..4.0, y in -4.0f64..4.0) {
        let cf = CFunction::new(RootDatum::<f64>::preset("a2").unwrap()).unwrap();
        let lambda = [x, y];
        let d = cf.density(&lambda);
        prop_assert!((cf.density(&[-x, -y]) - d).abs() <= 1e-12 * d.max(1e-300));
        for w in cf.datum().weyl_orbit(&lambda, 1e-12) {
            prop_assert!((cf.density(&w) - d).abs() <= 1e-10 * d.max(1e-300));
        }
    }

    #[test]
    fn rank_one_density_is_even(x in 0.001f64..30.0) {
        for name in ["h2", "h3", "h4", "ch2"] {
            let cf = CFunction::new(RootDatum::<f64>::preset(name).unwrap()).unwrap();
            let d = cf.density(&[x]);
            prop_assert!((cf.density(&[-x]) - d).abs() <= 1e-13 * d);
        }
    }
}

#[test]
fn c_function_normalized_for_every_preset() {
    for name in PRESETS {
        let cf = CFunction::new(RootDatum::<f64>::preset(name).unwrap()).unwrap();
        let z: Vec<C> = cf.datum().rho().iter().map(|&r| C::new(0.0, -r)).collect();
        let c = cf.c_function(&z).finite().unwrap();
        assert!((c - 1.0).norm() <= 1e-10, "{name}: {c}");
    }
}

#[test]
fn single_precision_c_function() {
    let cf = CFunction::new(RootDatum::<f32>::preset("h3").unwrap()).unwrap();
    // the h3 density is λ²
    let d = cf.density(&[1.5f32]);
    assert!((d - 2.25).abs() < 1e-4, "{d}");
}
