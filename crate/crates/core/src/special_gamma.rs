//! Complex log-gamma by the Lanczos approximation.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Distance to a nonpositive integer below which `z` counts as a pole.
pub const POLE_TOLERANCE: f64 = 1e-14;

/// `ln Γ(z)`, analytic continuation from the positive real axis.
///
/// Values for `Re z < 1/2` come from the reflection formula and agree with
/// the principal branch up to a multiple of `2πi`. Conjugate arguments give
/// bitwise conjugate results.
pub fn log_gamma<T: Real>(z: Complex<T>) -> Result<Complex<T>> {
    if z.im < T::zero() {
        return log_gamma(z.conj()).map(|w| w.conj());
    }
    if z.re < T::lit(0.5) {
        let nearest = z.re.round();
        if nearest <= T::zero() && (z - Complex::new(nearest, T::zero())).norm() < T::lit(POLE_TOLERANCE) {
            return Err(Error::Pole { re: z.re.as_f64(), im: z.im.as_f64() });
        }
        let one = Complex::new(T::one(), T::zero());
        let reflected = lanczos(one - z);
        return Ok(Complex::new(T::PI().ln(), T::zero()) - ln_sin_pi(z) - reflected);
    }
    Ok(lanczos(z))
}

/// `Γ(z)`; convenience wrapper over [`log_gamma`].
pub fn gamma<T: Real>(z: Complex<T>) -> Result<Complex<T>> {
    log_gamma(z).map(|w| w.exp())
}

/// Real `Γ(x)` for `x > 0`.
pub fn gamma_real<T: Real>(x: T) -> T {
    lanczos(Complex::new(x, T::zero())).re.exp()
}

fn lanczos<T: Real>(z: Complex<T>) -> Complex<T> {
    let zm1 = z - T::one();
    let mut a = Complex::new(T::lit(LANCZOS[0]), T::zero());
    for (k, &c) in LANCZOS.iter().enumerate().skip(1) {
        a = a + Complex::new(T::lit(c), T::zero()) / (zm1 + T::from_usize_lossy(k));
    }
    let t = zm1 + T::lit(LANCZOS_G + 0.5);
    let half_ln_two_pi = T::lit(0.5) * (T::lit(2.0) * T::PI()).ln();
    (zm1 + T::lit(0.5)) * t.ln() - t + a.ln() + half_ln_two_pi
}

/// `ln sin(πz)` for `Im z ≥ 0`, written to avoid overflow for large `Im z`.
fn ln_sin_pi<T: Real>(z: Complex<T>) -> Complex<T> {
    let i = Complex::new(T::zero(), T::one());
    let pi_z = z * T::PI();
    if z.im > T::one() {
        // sin(πz) = e^{-iπz} (e^{2iπz} − 1) / (2i)
        let e = (i * pi_z * T::lit(2.0)).exp();
        -i * pi_z + ((e - T::one()) / (i * T::lit(2.0))).ln()
    } else {
        pi_z.sin().ln()
    }
}
