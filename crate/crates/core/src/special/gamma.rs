use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

fn is_gamma_pole(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

/// Lanczos sum for Re z >= 1/2, returned in log form.
fn log_gamma_right(z: Complex64) -> Complex64 {
    let z = z - 1.0;
    let mut acc = Complex64::new(LANCZOS_COEF[0], 0.0);
    for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (z + 0.5) * t.ln() - t + LN_SQRT_2PI + acc.ln()
}

/// log(sin(pi z)), stable for large |Im z|. The imaginary part is defined
/// modulo 2 pi.
pub(crate) fn log_sin_pi(z: Complex64) -> Complex64 {
    let i = Complex64::i();
    if z.im.abs() < 15.0 {
        (z * PI).sin().ln()
    } else if z.im > 0.0 {
        let e = (2.0 * PI * i * z).exp();
        -i * PI * z + ((e - 1.0) / (2.0 * i)).ln()
    } else {
        let e = (-2.0 * PI * i * z).exp();
        i * PI * z + ((1.0 - e) / (2.0 * i)).ln()
    }
}

/// Logarithm of the Gamma function.
///
/// For Re z >= 1/2 the result is the principal branch continuous from the
/// positive real axis; for Re z < 1/2 it comes from the reflection formula and
/// its imaginary part may differ from that branch by a multiple of 2 pi, so
/// `exp` of the result is always Gamma(z).
pub fn log_gamma(z: Complex64) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain(format!("log_gamma of non-finite {z}")));
    }
    if is_gamma_pole(z) {
        return Err(Error::Pole {
            function: "Gamma",
            at: format!("{}", z.re),
        });
    }
    if z.re >= 0.5 {
        Ok(log_gamma_right(z))
    } else {
        Ok(Complex64::new(PI.ln(), 0.0) - log_sin_pi(z) - log_gamma_right(1.0 - z))
    }
}

/// Gamma(z).
pub fn gamma(z: Complex64) -> Result<Complex64> {
    Ok(log_gamma(z)?.exp())
}

/// 1/Gamma(z), an entire function; zero at the non-positive integers.
pub fn rgamma(z: Complex64) -> Complex64 {
    if is_gamma_pole(z) {
        return Complex64::new(0.0, 0.0);
    }
    if z.re >= 0.5 {
        (-log_gamma_right(z)).exp()
    } else {
        // sin(pi z) Gamma(1 - z) / pi keeps full accuracy next to the zeros.
        (z * PI).sin() * log_gamma_right(1.0 - z).exp() / PI
    }
}

/// Digamma function ψ(z) = Γ'(z)/Γ(z).
pub fn digamma(z: Complex64) -> Result<Complex64> {
    if is_gamma_pole(z) {
        return Err(Error::Pole {
            function: "digamma",
            at: format!("{}", z.re),
        });
    }
    if z.re < 0.5 {
        let cot = (z * PI).cos() / (z * PI).sin();
        return Ok(digamma(1.0 - z)? - PI * cot);
    }
    let mut z = z;
    let mut acc = Complex64::new(0.0, 0.0);
    while z.norm() < 12.0 {
        acc -= 1.0 / z;
        z += 1.0;
    }
    // Asymptotic series with Bernoulli numbers B_2 .. B_12.
    let b = [1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0, -691.0 / 2730.0];
    let w = 1.0 / (z * z);
    let mut pw = w;
    let mut series = Complex64::new(0.0, 0.0);
    for (j, bj) in b.iter().enumerate() {
        series += bj / (2.0 * (j as f64 + 1.0)) * pw;
        pw *= w;
    }
    Ok(acc + z.ln() - 0.5 / z - series)
}

/// log Gamma(x) for real x > 0.
pub fn ln_gamma_real(x: f64) -> Result<f64> {
    if x <= 0.0 {
        return Err(Error::Domain(format!("ln_gamma_real needs x > 0, got {x}")));
    }
    Ok(log_gamma(Complex64::new(x, 0.0))?.re)
}

/// Beta function B(x, y) for real positive arguments.
pub fn beta_real(x: f64, y: f64) -> Result<f64> {
    Ok((ln_gamma_real(x)? + ln_gamma_real(y)? - ln_gamma_real(x + y)?).exp())
}

/// Riemann zeta at a real argument x > 1.
pub fn riemann_zeta_real(x: f64) -> Result<f64> {
    if x <= 1.0 {
        return Err(Error::Domain(format!("zeta needs x > 1, got {x}")));
    }
    // Euler-Maclaurin with n terms and Bernoulli corrections.
    let n = 20usize;
    let nf = n as f64;
    let mut sum: f64 = (1..n).map(|k| (k as f64).powf(-x)).sum();
    sum += nf.powf(1.0 - x) / (x - 1.0) + 0.5 * nf.powf(-x);
    let bernoulli = [1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0, -691.0 / 2730.0];
    let mut rising = x;
    let mut fact = 2.0;
    let mut power = nf.powf(-x - 1.0);
    for (j, b) in bernoulli.iter().enumerate() {
        sum += b / fact * rising * power;
        let k = 2 * j + 2;
        rising *= (x + k as f64 - 1.0) * (x + k as f64);
        fact *= (k as f64 + 1.0) * (k as f64 + 2.0);
        power /= nf * nf;
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digamma_reference() {
        // mpmath.digamma
        let v = digamma(Complex64::new(2.3, 0.7)).unwrap();
        assert!((v - Complex64::new(0.666_363_734_240_141_4, 0.363_813_386_063_196_1)).norm() < 1e-14, "{v}");
        let v = digamma(Complex64::new(-1.4, 0.2)).unwrap();
        assert!((v - Complex64::new(1.339_951_284_785_581_3, 1.770_225_393_418_072_2)).norm() < 1e-13, "{v}");
        let d = digamma(Complex64::new(3.0, 0.0)).unwrap() - digamma(Complex64::new(2.0, 0.0)).unwrap();
        assert!((d.re - 0.5).abs() < 1e-15);
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn factorials() {
        for n in 1..15u32 {
            let f: f64 = (1..n).map(|k| k as f64).product();
            let lg = log_gamma(c(n as f64, 0.0)).unwrap();
            assert!((lg.re - f.ln()).abs() < 1e-13 * f.ln().abs().max(1.0));
            assert!(lg.im.abs() < 1e-15);
        }
    }

    #[test]
    fn half() {
        let lg = log_gamma(c(0.5, 0.0)).unwrap();
        assert!((lg.re - PI.sqrt().ln()).abs() < 1e-14);
    }

    #[test]
    fn negative_half_integer() {
        // Gamma(-1/2) = -2 sqrt(pi)
        let g = gamma(c(-0.5, 0.0)).unwrap();
        assert!((g - c(-2.0 * PI.sqrt(), 0.0)).norm() < 1e-13);
    }

    #[test]
    fn poles() {
        assert!(matches!(log_gamma(c(0.0, 0.0)), Err(Error::Pole { .. })));
        assert!(matches!(log_gamma(c(-3.0, 0.0)), Err(Error::Pole { .. })));
        assert_eq!(rgamma(c(-2.0, 0.0)), c(0.0, 0.0));
    }

    #[test]
    fn complex_reference() {
        // mpmath.loggamma(1.3+0.8j)
        let lg = log_gamma(c(1.3, 0.8)).unwrap();
        let expected = c(-0.437_545_340_727_249_2, -0.048_207_399_334_792_91);
        assert!((lg - expected).norm() < 1e-13, "{lg}");
    }

    #[test]
    fn large_imaginary_part() {
        // |Gamma(1/2 + i y)|^2 = pi / cosh(pi y)
        for y in [5.0, 30.0, 120.0] {
            let lg = log_gamma(c(0.5, y)).unwrap();
            let expected = 0.5 * (PI.ln() - (PI * y - (2.0f64).ln() + (-2.0 * PI * y).exp().ln_1p()));
            assert!((lg.re - expected).abs() < 1e-11 * expected.abs().max(1.0));
        }
        let lg = log_gamma(c(-0.3, -40.0)).unwrap();
        let back = log_gamma(c(1.3, 40.0)).unwrap();
        // reflection consistency: Gamma(z) Gamma(1 - z) = pi / sin(pi z)
        let lhs = (lg + back).exp() * (c(-0.3, -40.0) * PI).sin();
        assert!((lhs / PI - 1.0).norm() < 1e-10);
    }

    #[test]
    fn rgamma_near_pole() {
        let eps = 1e-9;
        let r = rgamma(c(-1.0 + eps, 0.0));
        // 1/Gamma(-1 + e) ~ -e
        assert!((r.re + eps).abs() < 1e-15);
    }

    #[test]
    fn zeta_values() {
        assert!((riemann_zeta_real(2.0).unwrap() - PI * PI / 6.0).abs() < 1e-14);
        assert!((riemann_zeta_real(3.0).unwrap() - 1.202_056_903_159_594_2).abs() < 1e-14);
        assert!((riemann_zeta_real(1.5).unwrap() - 2.612_375_348_685_488).abs() < 1e-13);
    }
}
