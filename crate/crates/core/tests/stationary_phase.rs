use num_complex::Complex;
use sympwave::stationary_phase::{k_n, k_n_bound, PhaseProblem};

type C = Complex<f64>;

fn amplitudes() -> Vec<(&'static str, fn(f64) -> C)> {
    vec![
        ("one", |_| C::new(1.0, 0.0)),
        ("sin", |t: f64| C::new(t.sin(), 0.0)),
        ("poly", |t: f64| C::new(1.0 + t * t, 0.0)),
    ]
}

#[test]
fn decomposition_reproduces_direct_quadrature() {
    for (name, g) in amplitudes() {
        let prob = PhaseProblem::neg_cos(g).unwrap();
        for &x in &[20.0, 50.0, 100.0] {
            for (n, m) in [(1, 1), (2, 1), (3, 2)] {
                let e = prob.expand(x, n, m).unwrap();
                let o = prob.oracle(x);
                assert!(o.converged);
                let err = (e.total - o.value).norm();
                assert!(err <= 1e-6 * o.value.norm() + 1e-9, "{name} x={x} N={n} M={m}: {err:e}");
            }
        }
    }
}

#[test]
fn leading_term_and_accuracy_at_x100() {
    let prob = PhaseProblem::neg_cos(|_| C::new(1.0, 0.0)).unwrap();
    let x = 100.0;
    let e = prob.expand(x, 1, 1).unwrap();
    let lead = sympwave::cis(-x) * e.main_terms[0];
    let expected = sympwave::cis(-x + std::f64::consts::FRAC_PI_4) * (std::f64::consts::PI / 200.0).sqrt();
    assert!((lead - expected).norm() < 1e-10, "{lead} vs {expected}");
    assert!((e.total - prob.oracle(x).value).norm() <= 5e-3);
}

#[test]
fn main_term_error_decays_at_predicted_rate() {
    // N = 1: the neglected pieces are O(1/x)
    let prob = PhaseProblem::neg_cos(|_| C::new(1.0, 0.0)).unwrap();
    let n = 1;
    let err = |x: f64| {
        let e = prob.expand(x, n, 1).unwrap();
        let main: C = e.main_terms.iter().sum();
        (sympwave::cis(-x) * main - prob.oracle(x).value).norm()
    };
    for &x in &[50.0, 100.0, 200.0] {
        let ratio = err(x) / err(2.0 * x);
        assert!(ratio >= 2f64.powf((n as f64 + 1.0) / 2.0) * 0.8, "x={x}: ratio {ratio}");
    }
}

#[test]
fn zero_amplitude_gives_zero_fields() {
    let prob = PhaseProblem::neg_cos(|_| C::new(0.0, 0.0)).unwrap();
    let e = prob.expand(30.0, 2, 2).unwrap();
    assert!(e.main_terms.iter().chain(&e.i2_terms).all(|z| z.norm() == 0.0));
    assert_eq!(e.r1.norm(), 0.0);
    assert_eq!(e.r2.norm(), 0.0);
    assert_eq!(e.total.norm(), 0.0);
    assert_eq!(prob.oracle(30.0).value.norm(), 0.0);
}

#[test]
fn amplitude_at_origin_matches_limit() {
    // q(0) = g(a) √2 / √f''(a) for p = 2
    let prob = PhaseProblem::neg_cos(|t: f64| C::new(2.0 + t, 0.5)).unwrap();
    let amp = prob.amplitude(64, 3).unwrap();
    let expected = C::new(2.0, 0.5) * 2f64.sqrt();
    assert!((amp.q(0.0) - expected).norm() < 1e-8);
}

#[test]
fn oracle_is_self_consistent() {
    let prob = PhaseProblem::neg_cos(|_| C::new(1.0, 0.0)).unwrap();
    let o = prob.oracle(10.0);
    assert!(o.converged);
    assert!(o.error <= 1e-9 * o.value.norm());
}

#[test]
fn k_n_respects_uniform_bound_on_grid() {
    let mut violations = 0;
    let mut count = 0;
    for n in 1..=5 {
        for iu in 0..10 {
            for ix in 0..20 {
                let u = 0.25 * iu as f64;
                let x = 10f64.powf(2.0 * ix as f64 / 19.0);
                let bound = k_n_bound(n, x, 2);
                // equality holds at u = 0, so allow rounding at the last digits
                if k_n(n, u, x, 2).norm() > bound * (1.0 + 1e-12) {
                    violations += 1;
                }
                count += 1;
            }
        }
    }
    assert_eq!(count, 1000);
    assert_eq!(violations, 0);
}
