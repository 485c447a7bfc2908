use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

const PI2_6: f64 = PI * PI / 6.0;

fn power_series(z: Complex64) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    let mut zn = z;
    for n in 1..200 {
        let term = zn / ((n * n) as f64);
        sum += term;
        if term.norm() <= f64::EPSILON * 0.25 * sum.norm() {
            break;
        }
        zn *= z;
    }
    sum
}

/// zeta(2k) for k >= 1.
fn zeta_even(k: usize) -> f64 {
    match k {
        1 => PI2_6,
        2 => PI.powi(4) / 90.0,
        3 => PI.powi(6) / 945.0,
        4 => PI.powi(8) / 9450.0,
        _ => (1..60).map(|n| (n as f64).powi(-2 * k as i32)).sum(),
    }
}

/// Li2(z) = sum_n B_n u^(n+1)/(n+1)! with u = -log(1 - z); needs |u| < 2 pi.
fn bernoulli_series(z: Complex64) -> Complex64 {
    let u = -(1.0 - z).ln();
    let u2 = u * u;
    let mut sum = u - u2 / 4.0;
    let mut upow = u;
    let two_pi_sq = 4.0 * PI * PI;
    let mut scale = 1.0;
    for k in 1..80usize {
        upow *= u2;
        scale /= two_pi_sq;
        // B_{2k}/(2k+1)! = (-1)^{k+1} 2 zeta(2k) / ((2k+1) (2 pi)^{2k})
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        let coef = sign * 2.0 * zeta_even(k) * scale / (2 * k + 1) as f64;
        let term = upow * coef;
        sum += term;
        if term.norm() <= f64::EPSILON * 0.25 * sum.norm() {
            break;
        }
    }
    sum
}

/// Euler dilogarithm Li2(z) = sum z^n / n^2, principal branch, for Re z <= 1.
pub fn dilog(z: Complex64) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain(format!("dilog of non-finite {z}")));
    }
    if z.re > 1.0 {
        return Err(Error::Branch(format!("dilog needs Re z <= 1, got {z}")));
    }
    if z.norm() == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    if z == Complex64::new(1.0, 0.0) {
        return Ok(Complex64::new(PI2_6, 0.0));
    }
    if z.norm() <= 0.5 {
        return Ok(power_series(z));
    }
    let w = 1.0 - z;
    if w.norm() <= 0.5 {
        // Li(z) = pi^2/6 - log z log(1 - z) - Li(1 - z)
        return Ok(PI2_6 - z.ln() * w.ln() - power_series(w));
    }
    if z.norm() <= 1.0 {
        return Ok(bernoulli_series(z));
    }
    // Inversion: Li(z) = -pi^2/6 - log^2(-z)/2 - Li(1/z), valid off [1, inf).
    let l = (-z).ln();
    Ok(-PI2_6 - 0.5 * l * l - dilog(1.0 / z)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn special_values() {
        assert_eq!(dilog(c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
        assert!((dilog(c(1.0, 0.0)).unwrap().re - PI2_6).abs() < 1e-15);
        let half = dilog(c(0.5, 0.0)).unwrap();
        let ln2 = 2f64.ln();
        assert!((half.re - (PI * PI / 12.0 - ln2 * ln2 / 2.0)).abs() < 1e-15);
        assert!((dilog(c(-1.0, 0.0)).unwrap().re + PI * PI / 12.0).abs() < 1e-14);
    }

    #[test]
    fn references() {
        // mpmath.polylog(2, z)
        let cases = [
            (c(0.3, 0.9), c(0.080_535_300_005_841_72, 0.949_675_072_380_933_1)),
            (c(-2.0, 1.0), c(-1.489_092_043_030_657_8, 0.540_931_003_198_579_1)),
            (c(0.9, 0.2), c(1.189_865_582_603_562_4, 0.447_184_904_723_911_74)),
            (c(-5.0, 0.0), c(-2.749_279_126_060_808_3, 0.0)),
        ];
        for (z, expected) in cases {
            let v = dilog(z).unwrap();
            assert!((v - expected).norm() < 1e-14, "{z}: {v}");
        }
    }

    #[test]
    fn branch_error() {
        assert!(matches!(dilog(c(1.5, 0.0)), Err(Error::Branch(_))));
    }
}
