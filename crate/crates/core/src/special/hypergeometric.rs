use num_complex::Complex64;

use crate::error::{Error, Result};

const MAX_TERMS: usize = 20_000;
const MAX_TAYLOR_TERMS: usize = 400;

fn is_non_positive_integer(c: Complex64) -> bool {
    c.im == 0.0 && c.re <= 0.0 && c.re == c.re.round()
}

/// Raw Gauss series; converges for |z| < 1.
fn series(a: Complex64, b: Complex64, c: Complex64, z: Complex64) -> Result<Complex64> {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut small = 0;
    for n in 0..MAX_TERMS {
        let nf = n as f64;
        term *= (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * z;
        sum += term;
        if term.norm() <= f64::EPSILON * 0.5 * sum.norm() {
            small += 1;
            if small >= 3 {
                return Ok(sum);
            }
        } else if term == Complex64::new(0.0, 0.0) {
            return Ok(sum);
        } else {
            small = 0;
        }
    }
    Err(Error::NonConvergence {
        what: "hypergeometric series",
        detail: format!("{MAX_TERMS} terms at z = {z}"),
    })
}

/// Advances (F, F') along a straight path by Taylor expansion of the
/// hypergeometric equation, staying inside half the local radius of
/// convergence min(|z|, |1 - z|).
fn continue_along(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    mut z: Complex64,
    mut f: Complex64,
    mut df: Complex64,
    target: Complex64,
) -> Result<(Complex64, Complex64)> {
    let ab = a * b;
    let s1 = a + b + 1.0;
    for _ in 0..10_000 {
        let remaining = target - z;
        if remaining.norm() == 0.0 {
            return Ok((f, df));
        }
        let radius = z.norm().min((1.0 - z).norm());
        let h = if remaining.norm() <= 0.5 * radius {
            remaining
        } else {
            remaining / remaining.norm() * (0.5 * radius)
        };
        let p0 = z * (1.0 - z);
        let p1 = 1.0 - 2.0 * z;
        let q0 = c - s1 * z;
        let mut coef_prev = f;
        let mut coef = df;
        let mut value = f + df * h;
        let mut deriv = df;
        let mut hpow = h;
        let mut small = 0;
        let mut converged = false;
        for n in 0..MAX_TAYLOR_TERMS {
            let nf = n as f64;
            let next = -((p1 * nf + q0) * (nf + 1.0) * coef
                + (-nf * (nf - 1.0) - s1 * nf - ab) * coef_prev)
                / (p0 * (nf + 2.0) * (nf + 1.0));
            // hpow = h^(n+1) here
            let dterm = next * (nf + 2.0) * hpow;
            hpow *= h;
            let term = next * hpow;
            value += term;
            deriv += dterm;
            coef_prev = coef;
            coef = next;
            if term.norm() <= f64::EPSILON * 0.25 * value.norm()
                && dterm.norm() <= f64::EPSILON * 0.25 * deriv.norm()
            {
                small += 1;
                if small >= 3 {
                    converged = true;
                    break;
                }
            } else {
                small = 0;
            }
        }
        if !converged {
            return Err(Error::NonConvergence {
                what: "hypergeometric continuation",
                detail: format!("Taylor step at z = {z}"),
            });
        }
        f = value;
        df = deriv;
        z += h;
    }
    Err(Error::NonConvergence {
        what: "hypergeometric continuation",
        detail: format!("too many steps towards {target}"),
    })
}

/// F and F' inside the unit disc.
fn unit_disc(a: Complex64, b: Complex64, c: Complex64, z: Complex64) -> Result<(Complex64, Complex64)> {
    let deriv = |z| -> Result<Complex64> {
        Ok(a * b / c * series(a + 1.0, b + 1.0, c + 1.0, z)?)
    };
    if z.norm() <= 0.75 {
        return Ok((series(a, b, c, z)?, deriv(z)?));
    }
    let start = z / z.norm() * 0.5;
    let f0 = series(a, b, c, start)?;
    let df0 = deriv(start)?;
    continue_along(a, b, c, start, f0, df0, z)
}

fn check_params(c: Complex64) -> Result<()> {
    if is_non_positive_integer(c) {
        return Err(Error::Pole {
            function: "hypergeometric parameter c",
            at: format!("{}", c.re),
        });
    }
    Ok(())
}

/// F and dF/dz together.
pub fn hyp2f1_with_derivative(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    z: Complex64,
) -> Result<(Complex64, Complex64)> {
    check_params(c)?;
    if z.norm() <= 0.5 {
        let f = series(a, b, c, z)?;
        let df = a * b / c * series(a + 1.0, b + 1.0, c + 1.0, z)?;
        return Ok((f, df));
    }
    if z.im == 0.0 && z.re < 0.0 {
        // Pfaff: F(a,b;c;z) = (1-z)^{-a} F(a, c-b; c; w), w = z/(z-1) in (0,1).
        let w = z / (z - 1.0);
        let (g, dg) = unit_disc(a, c - b, c, w)?;
        let one_minus = 1.0 - z;
        let pre = (-a * one_minus.ln()).exp();
        let dw = -1.0 / (one_minus * one_minus);
        let f = pre * g;
        let df = pre * (a / one_minus * g + dg * dw);
        return Ok((f, df));
    }
    if z.norm() < 1.0 {
        return unit_disc(a, b, c, z);
    }
    Err(Error::Domain(format!(
        "hypergeometric argument {z} outside the unit disc and the negative real axis"
    )))
}

/// Gauss hypergeometric function F(a, b; c; z) for |z| < 1 or real z < 0.
pub fn hyp2f1(a: Complex64, b: Complex64, c: Complex64, z: Complex64) -> Result<Complex64> {
    Ok(hyp2f1_with_derivative(a, b, c, z)?.0)
}

/// dF/dz = (ab/c) F(a+1, b+1; c+1; z).
pub fn hyp2f1_derivative(a: Complex64, b: Complex64, c: Complex64, z: Complex64) -> Result<Complex64> {
    Ok(hyp2f1_with_derivative(a, b, c, z)?.1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn zero_argument() {
        assert_eq!(hyp2f1(c(0.3, 1.0), c(2.0, 0.0), c(1.5, -0.2), c(0.0, 0.0)).unwrap(), c(1.0, 0.0));
    }

    #[test]
    fn log_closed_form() {
        let v = hyp2f1(c(1.0, 0.0), c(1.0, 0.0), c(2.0, 0.0), c(0.5, 0.0)).unwrap();
        assert!((v.re - 2.0 * 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn pfaff_reference() {
        // mpmath.hyp2f1(0.6, 1.1, 1.6+0.6j, -3)
        let v = hyp2f1(c(0.6, 0.0), c(1.1, 0.0), c(1.6, 0.6), c(-3.0, 0.0)).unwrap();
        let expected = c(0.562_431_514_641_628_6, 0.088_069_771_426_766_26);
        assert!((v - expected).norm() < 1e-13, "{v}");
    }

    #[test]
    fn complex_disc_reference() {
        // mpmath.hyp2f1(0.3+0.2j, 1.7, 2.5-0.4j, 0.6+0.7j)
        let v = hyp2f1(c(0.3, 0.2), c(1.7, 0.0), c(2.5, -0.4), c(0.6, 0.7)).unwrap();
        let expected = c(0.880_728_517_775_785_3, 0.197_229_412_401_295_4);
        assert!((v - expected).norm() < 1e-12, "{v}");
    }

    #[test]
    fn near_one_reference() {
        // mpmath.hyp2f1(0.5, 1.5, 1.1, 0.97); c - a - b < 0
        let v = hyp2f1(c(0.5, 0.0), c(1.5, 0.0), c(1.1, 0.0), c(0.97, 0.0)).unwrap();
        assert!((v.re - 15.920_069_140_967_009).abs() < 1e-11, "{v}");
    }

    #[test]
    fn parameter_pole() {
        assert!(matches!(
            hyp2f1(c(1.0, 0.0), c(1.0, 0.0), c(-2.0, 0.0), c(0.1, 0.0)),
            Err(Error::Pole { .. })
        ));
    }

    #[test]
    fn outside_domain() {
        assert!(matches!(
            hyp2f1(c(1.0, 0.0), c(1.0, 0.0), c(2.0, 0.0), c(1.5, 0.0)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn terminating_series() {
        // F(-2, b; c; z) = 1 - 2bz/c + b(b+1)z^2/(c(c+1))
        let (b, cc, z) = (c(0.7, 0.1), c(1.3, 0.0), c(-5.0, 0.0));
        let expected = 1.0 - 2.0 * b * z / cc + b * (b + 1.0) * z * z / (cc * (cc + 1.0));
        let v = hyp2f1(c(-2.0, 0.0), b, cc, z).unwrap();
        assert!((v - expected).norm() < 1e-12 * expected.norm());
    }
}
