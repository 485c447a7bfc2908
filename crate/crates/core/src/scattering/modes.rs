//! Fourier modes of Laplace eigenfunctions on the cylinder X_ℓ.
//!
//! The n-th mode solves (ℓ²+a²)u″ + 2au′ + (s(1-s) - 4π²n²/(ℓ²+a²))u = 0 and
//! the distinguished solution on a < 0 is
//! h^n(ℓ,s)(a) = |a|^{-s}(1+ℓ²/a²)^{-iπn/ℓ} F(s/2-iπn/ℓ, 1/2+s/2-iπn/ℓ; 1/2+s; -ℓ²/a²).

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::special::{hyp2f1_with_derivative, log_gamma, rgamma};

/// Evaluations closer than this to a pole of the meromorphic families are refused.
pub const POLE_GUARD: f64 = 1e-6;

/// Refuses s near the poles -1/2 - k of h(ℓ, s).
pub fn check_mode_parameter(s: Complex64) -> Result<()> {
    if !(s.re.is_finite() && s.im.is_finite()) {
        return Err(Error::Domain(format!("non-finite s = {s}")));
    }
    if s.re < 0.0 {
        let k = (-s.re - 0.5).round().max(0.0);
        let p = Complex64::new(-0.5 - k, 0.0);
        let d = (s - p).norm();
        if d < POLE_GUARD {
            return Err(Error::PoleProximity {
                what: "mode function h(ℓ, s)",
                at: format!("{}", p.re),
                distance: d,
            });
        }
    }
    Ok(())
}

fn check_args(ell: f64, n: i64, a: f64) -> Result<()> {
    if !(ell >= 0.0) || !ell.is_finite() {
        return Err(Error::Domain(format!("ℓ must be non-negative, got {ell}")));
    }
    if n != 0 && ell == 0.0 {
        return Err(Error::Domain("non-constant modes need ℓ > 0".into()));
    }
    if !(a < 0.0) || !a.is_finite() {
        return Err(Error::Domain(format!("mode functions are defined on a < 0, got {a}")));
    }
    Ok(())
}

/// h^n(ℓ,s)(a) and its a-derivative, a < 0. Near the core |a| < ℓ the
/// constant mode is evaluated by the two-term form centred at a = 0.
pub fn mode_with_derivative(ell: f64, s: Complex64, n: i64, a: f64) -> Result<(Complex64, Complex64)> {
    check_args(ell, n, a)?;
    check_mode_parameter(s)?;
    if n == 0 && ell > 0.0 && -a < ell {
        return center_form(ell, s, a);
    }
    hypergeometric_form(ell, s, n, a)
}

pub fn mode_function(ell: f64, s: Complex64, n: i64, a: f64) -> Result<Complex64> {
    Ok(mode_with_derivative(ell, s, n, a)?.0)
}

pub fn mode_derivative(ell: f64, s: Complex64, n: i64, a: f64) -> Result<Complex64> {
    Ok(mode_with_derivative(ell, s, n, a)?.1)
}

/// The defining hypergeometric expression for every a < 0, evaluated in the
/// Pfaff-transformed form (ℓ²+a²)^{-s/2} F(s/2-iμ, s/2+iμ; 1/2+s; ℓ²/(ℓ²+a²)),
/// μ = πn/ℓ, whose series has no cancellation for large μ.
pub fn hypergeometric_form(ell: f64, s: Complex64, n: i64, a: f64) -> Result<(Complex64, Complex64)> {
    check_args(ell, n, a)?;
    check_mode_parameter(s)?;
    let i = Complex64::i();
    let mu = if n == 0 { 0.0 } else { PI * n as f64 / ell };
    let l2 = ell * ell;
    let q = l2 + a * a;
    let w = Complex64::new(l2 / q, 0.0);
    let (g, dg) = hyp2f1_with_derivative(s / 2.0 - i * mu, s / 2.0 + i * mu, 0.5 + s, w)?;
    let pre = (-s / 2.0 * q.ln()).exp();
    let u = pre * g;
    let du = -s * a / q * u + pre * dg * (-2.0 * a * l2 / (q * q));
    Ok((u, du))
}

/// h(ℓ,s) = ℓ^{-s} √π Γ(1/2+s)/Γ(1/2+s/2)² F(s/2, 1/2-s/2; 1/2; -a²/ℓ²)
///        + 2√π ℓ^{-1-s} Γ(1/2+s)/Γ(s/2)² · a F(1/2+s/2, 1-s/2; 3/2; -a²/ℓ²),
/// which is analytic in a across the core and gives the continuation to a > 0.
pub fn center_form(ell: f64, s: Complex64, a: f64) -> Result<(Complex64, Complex64)> {
    if !(ell > 0.0) {
        return Err(Error::Domain("the centred form needs ℓ > 0".into()));
    }
    check_mode_parameter(s)?;
    let sqrt_pi = PI.sqrt();
    let lg = log_gamma(0.5 + s)?;
    let r1 = rgamma(0.5 + s / 2.0);
    let r2 = rgamma(s / 2.0);
    let g1 = (-s * ell.ln() + lg).exp() * sqrt_pi * r1 * r1;
    let g2 = (-(1.0 + s) * ell.ln() + lg).exp() * 2.0 * sqrt_pi * r2 * r2;
    let w = Complex64::new(-a * a / (ell * ell), 0.0);
    let dw = -2.0 * a / (ell * ell);
    let one = Complex64::new(1.0, 0.0);
    let (f1, df1) = hyp2f1_with_derivative(s / 2.0, 0.5 - s / 2.0, 0.5 * one, w)?;
    let (f2, df2) = hyp2f1_with_derivative(0.5 + s / 2.0, 1.0 - s / 2.0, 1.5 * one, w)?;
    let u = g1 * f1 + g2 * a * f2;
    let du = g1 * df1 * dw + g2 * (f2 + a * df2 * dw);
    Ok((u, du))
}

/// α(s) = 1/cos(πs) and β(s) = 4^s Γ(1/2+s)²/((2s-1)Γ(s)²), the coefficients of
/// the continuation of h(ℓ,s) to a > 0:
/// h(ℓ,s)(a) = [α(s) h(ℓ,s) + ℓ^{1-2s} β(s) h(ℓ,1-s)](-a).
pub fn connection_coefficients(s: Complex64) -> Result<(Complex64, Complex64)> {
    check_mode_parameter(s)?;
    let half = Complex64::new(0.5, 0.0);
    if (s - half).norm() < POLE_GUARD {
        return Err(Error::PoleProximity {
            what: "connection coefficient β",
            at: "0.5".into(),
            distance: (s - half).norm(),
        });
    }
    let cos = (PI * s).cos();
    check_half_integer(s)?;
    let alpha = 1.0 / cos;
    let rg = rgamma(s);
    let beta = (s * 4f64.ln() + 2.0 * log_gamma(0.5 + s)?).exp() * rg * rg / (2.0 * s - 1.0);
    Ok((alpha, beta))
}

/// Refuses s within [`POLE_GUARD`] of a half-integer, where cos(πs) = 0.
pub fn check_half_integer(s: Complex64) -> Result<()> {
    let k = (s.re - 0.5).round();
    let p = Complex64::new(k + 0.5, 0.0);
    let d = (s - p).norm();
    if d < POLE_GUARD {
        return Err(Error::PoleProximity {
            what: "1/cos(πs)",
            at: format!("{}", p.re),
            distance: d,
        });
    }
    Ok(())
}

/// The smooth eigenfunction continuation of h(ℓ,s) from a < 0 to the whole
/// line (ℓ > 0), with its derivative. The centred form is used for a > -ℓ; it
/// stays regular at half-integer s where α and β have cancelling poles.
pub fn continued_mode(ell: f64, s: Complex64, a: f64) -> Result<(Complex64, Complex64)> {
    if !(ell > 0.0) {
        return Err(Error::Domain("continuation across the core needs ℓ > 0".into()));
    }
    if !a.is_finite() {
        return Err(Error::Domain(format!("non-finite a = {a}")));
    }
    if a > -ell {
        return center_form(ell, s, a);
    }
    hypergeometric_form(ell, s, 0, a)
}

/// The continuation of h(ℓ,s) to a > 0 written through the connection
/// coefficients: [α(s) h(ℓ,s) + ℓ^{1-2s} β(s) h(ℓ,1-s)](-a).
pub fn connected_mode(ell: f64, s: Complex64, a: f64) -> Result<(Complex64, Complex64)> {
    if !(ell > 0.0 && a > 0.0) {
        return Err(Error::Domain(format!("connected form needs ℓ > 0 and a > 0, got ({ell}, {a})")));
    }
    let (alpha, beta) = connection_coefficients(s)?;
    let (u1, d1) = mode_with_derivative(ell, s, 0, -a)?;
    let (u2, d2) = mode_with_derivative(ell, 1.0 - s, 0, -a)?;
    let k = ((1.0 - 2.0 * s) * ell.ln()).exp() * beta;
    Ok((alpha * u1 + k * u2, -(alpha * d1 + k * d2)))
}

/// ω_ℓ(s1,s2;a) = det [[h(s1), h(s2)], [∂h(s1), ∂h(s2)]] at a < 0.
pub fn wronskian(ell: f64, s1: Complex64, s2: Complex64, a: f64) -> Result<Complex64> {
    let (u1, d1) = mode_with_derivative(ell, s1, 0, a)?;
    let (u2, d2) = mode_with_derivative(ell, s2, 0, a)?;
    Ok(u1 * d2 - d1 * u2)
}

/// Residual of the mode equation for given (u, u′, u″) at a.
pub fn ode_residual(ell: f64, s: Complex64, n: i64, a: f64, u: Complex64, du: Complex64, d2u: Complex64) -> Complex64 {
    let p = ell * ell + a * a;
    let q = s * (1.0 - s) - 4.0 * PI * PI * (n * n) as f64 / p;
    p * d2u + 2.0 * a * du + q * u
}

/// Integrates the mode equation from (a0, u0, u0′) to a1 with the classical
/// fourth-order Runge-Kutta scheme on `steps` equal steps. Needs ℓ² + a² > 0
/// along the path.
pub fn ode_continue(
    ell: f64,
    s: Complex64,
    n: i64,
    a0: f64,
    u0: Complex64,
    du0: Complex64,
    a1: f64,
    steps: usize,
) -> Result<(Complex64, Complex64)> {
    if steps == 0 {
        return Err(Error::Input("ode_continue needs at least one step".into()));
    }
    let lam = s * (1.0 - s);
    let n2 = 4.0 * PI * PI * (n * n) as f64;
    let rhs = |a: f64, u: Complex64, v: Complex64| -> Result<(Complex64, Complex64)> {
        let p = ell * ell + a * a;
        if p == 0.0 {
            return Err(Error::Domain("mode equation is singular at a = 0 when ℓ = 0".into()));
        }
        Ok((v, -(2.0 * a * v + (lam - n2 / p) * u) / p))
    };
    let h = (a1 - a0) / steps as f64;
    let (mut u, mut v) = (u0, du0);
    for k in 0..steps {
        let a = a0 + k as f64 * h;
        let (k1u, k1v) = rhs(a, u, v)?;
        let (k2u, k2v) = rhs(a + 0.5 * h, u + 0.5 * h * k1u, v + 0.5 * h * k1v)?;
        let (k3u, k3v) = rhs(a + 0.5 * h, u + 0.5 * h * k2u, v + 0.5 * h * k2v)?;
        let (k4u, k4v) = rhs(a + h, u + h * k3u, v + h * k3v)?;
        u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
        v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    }
    Ok((u, v))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn cusp_mode_is_a_power() {
        let v = mode_function(0.0, c(0.8, 0.0), 0, -2.0).unwrap();
        assert!((v.re - 2f64.powf(-0.8)).abs() < 1e-15 && v.im == 0.0);
    }

    #[test]
    fn small_ell_limit() {
        let a = mode_function(0.01, c(0.8, 0.0), 0, -1.0).unwrap();
        let b = mode_function(0.0, c(0.8, 0.0), 0, -1.0).unwrap();
        assert!((a - b).norm() < 1e-3);
    }

    #[test]
    fn forms_agree_near_core() {
        for (ell, s, a) in [(0.5, c(1.1, 0.0), -0.4), (1.0, c(0.8, 0.3), -0.9), (2.0, c(2.0, -1.0), -1.5)] {
            let (u1, d1) = center_form(ell, s, a).unwrap();
            let (u2, d2) = hypergeometric_form(ell, s, 0, a).unwrap();
            assert!((u1 - u2).norm() < 1e-12 * u2.norm(), "{ell} {s} {a}");
            assert!((d1 - d2).norm() < 1e-11 * d2.norm().max(1.0));
        }
    }

    #[test]
    fn wronskian_identity() {
        let (ell, s, a) = (0.7, c(1.3, 0.4), -0.9);
        let w = wronskian(ell, s, 1.0 - s, a).unwrap();
        assert!(((ell * ell + a * a) * w - (1.0 - 2.0 * s)).norm() < 1e-12);
        assert_eq!(wronskian(ell, s, s, a).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn alpha_is_odd_under_reflection() {
        let s = c(0.8, 0.3);
        let (a1, _) = connection_coefficients(s).unwrap();
        let (a2, _) = connection_coefficients(1.0 - s).unwrap();
        assert!((a1 + a2).norm() < 1e-14 * a1.norm());
    }

    #[test]
    fn guards() {
        assert!(matches!(mode_function(1.0, c(-1.5, 0.0), 0, -1.0), Err(Error::PoleProximity { .. })));
        assert!(matches!(connection_coefficients(c(0.5, 0.0)), Err(Error::PoleProximity { .. })));
        assert!(matches!(connection_coefficients(c(1.5 + 1e-8, 0.0)), Err(Error::PoleProximity { .. })));
        assert!(mode_function(0.0, c(0.8, 0.0), 1, -1.0).is_err());
        assert!(mode_function(1.0, c(0.8, 0.0), 0, 0.5).is_err());
    }
}
