//! Selberg Zeta factors of single geodesics, truncated Zeta products over
//! length spectra, the pinching asymptotic and the left half-plane ratio.
//!
//! The factor of a geodesic of length ℓ is Z_ℓ(s) = ∏_{k≥0}(1 - e^{-(s+k)ℓ})²,
//! accumulated as a sum of logarithms.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::{dilog, exp_m1, ln_1p, log_gamma};
use crate::surface::LengthSpectrum;

/// Hard cap on the number of factors in one product.
const MAX_TERMS: usize = 50_000_000;

/// A product evaluated in log space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZetaValue {
    pub value: Complex64,
    /// Logarithm of the value, on an unspecified branch.
    pub log_value: Complex64,
    /// Bound on |value - exact|.
    pub error_bound: f64,
    /// Number of k-factors used (the largest count for a spectrum).
    pub terms: usize,
}

impl ZetaValue {
    fn from_log(log_value: Complex64, log_error: f64, terms: usize) -> Self {
        let value = log_value.exp();
        ZetaValue {
            value,
            log_value,
            error_bound: value.norm() * log_error.exp_m1().abs(),
            terms,
        }
    }
}

fn check_length(ell: f64) -> Result<()> {
    if !(ell > 0.0) || !ell.is_finite() {
        return Err(Error::Domain(format!("geodesic length must be positive, got {ell}")));
    }
    Ok(())
}

/// Σ_{k≥start} 2 log(1 - e^{-(s+k)ℓ}) skipping `skip`, with the bound on the
/// discarded tail.
fn log_product(ell: f64, s: Complex64, tol: f64, start: usize, skip: Option<usize>) -> Result<(Complex64, f64, usize)> {
    let one_minus_decay = -(-ell).exp_m1();
    let mut sum = Complex64::new(0.0, 0.0);
    let mut k = start;
    loop {
        let x = (-(s.re + k as f64) * ell).exp();
        if s.re + k as f64 > 0.0 && x < 0.5 {
            // Σ_{j≥k} 2|log(1-q_j)| ≤ 2 x / ((1 - x)(1 - e^{-ℓ}))
            let tail = 2.0 * x / ((1.0 - x) * one_minus_decay);
            if tail < tol {
                return Ok((sum, tail, k));
            }
        }
        if k - start > MAX_TERMS {
            return Err(Error::NonConvergence {
                what: "zeta product",
                detail: format!("more than {MAX_TERMS} factors at length {ell}"),
            });
        }
        if Some(k) != skip {
            let q = (-(s + k as f64) * ell).exp();
            let f = ln_1p(-q);
            if !f.re.is_finite() {
                return Ok((Complex64::new(f64::NEG_INFINITY, 0.0), 0.0, k));
            }
            sum += 2.0 * f;
        }
        k += 1;
    }
}

/// Z_ℓ(s) with the truncation index and error bound.
pub fn zeta_factor(ell: f64, s: Complex64, tol: f64) -> Result<ZetaValue> {
    check_length(ell)?;
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    let (log, err, terms) = log_product(ell, s, tol, 0, None)?;
    if log.re == f64::NEG_INFINITY {
        return Ok(ZetaValue {
            value: Complex64::new(0.0, 0.0),
            log_value: log,
            error_bound: 0.0,
            terms,
        });
    }
    Ok(ZetaValue::from_log(log, err, terms))
}

/// log Z_ℓ(s).
pub fn log_zeta_factor(ell: f64, s: Complex64, tol: f64) -> Result<Complex64> {
    check_length(ell)?;
    Ok(log_product(ell, s, tol, 0, None)?.0)
}

/// Product of Z_ℓ(s) over the primitive entries of a spectrum, each raised
/// to its multiplicity.
pub fn zeta_truncated(spectrum: &LengthSpectrum, s: Complex64, tol: f64) -> Result<ZetaValue> {
    let mut log = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    let mut terms = 0;
    let prim: Vec<_> = spectrum.entries.iter().filter(|e| e.primitive).collect();
    let per = tol / (prim.iter().map(|e| e.multiplicity).sum::<usize>().max(1) as f64);
    for e in prim {
        let (l, t, k) = log_product(e.length, s, per, 0, None)?;
        log += l * e.multiplicity as f64;
        err += t * e.multiplicity as f64;
        terms = terms.max(k);
    }
    Ok(ZetaValue::from_log(log, err, terms))
}

/// log(Γ(s)² Z_ℓ(s)), an entire function of s: at s = -m the double pole of
/// Γ² cancels the double zero of the k = m factor.
pub fn log_gamma_sq_zeta(ell: f64, s: Complex64, tol: f64) -> Result<Complex64> {
    check_length(ell)?;
    let m = (-s.re).round();
    let near_pole = m >= 0.0 && (s + m).norm() < 0.25;
    if !near_pole {
        let lg = log_gamma(s)?;
        return Ok(2.0 * lg + log_product(ell, s, tol, 0, None)?.0);
    }
    let m = m as usize;
    let eps = s + m as f64;
    // Γ(s)(s+m) = Γ(s+m+1)/∏_{j<m}(s+j)
    let mut lg = log_gamma(s + m as f64 + 1.0)?;
    for j in 0..m {
        lg -= (s + j as f64).ln();
    }
    // (1 - e^{-εℓ})/ε, with limit ℓ at ε = 0
    let lead = if eps.norm() == 0.0 {
        Complex64::new(ell, 0.0)
    } else {
        -exp_m1(-eps * ell) / eps
    };
    let (rest, _, _) = log_product(ell, s, tol, 0, Some(m))?;
    Ok(2.0 * lg + 2.0 * lead.ln() + rest)
}

/// Γ(s)² Z_ℓ(s) e^{π²/(3ℓ)} ℓ^{2s-1}, which tends to 2π as ℓ -> 0.
pub fn pinch_asymptotic(ell: f64, s: Complex64) -> Result<Complex64> {
    let log = log_gamma_sq_zeta(ell, s, 1e-15)?;
    Ok((log + PI * PI / (3.0 * ell) + (2.0 * s - 1.0) * ell.ln()).exp())
}

/// log Z_ℓ(s) split as log(1 - e^{-sℓ}) + dilogarithm part + Binet part.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PinchDecomposition {
    pub log_factor: Complex64,
    pub log_term: Complex64,
    pub dilog_term: Complex64,
    pub binet_term: Complex64,
    pub residual: f64,
}

/// 1/(e^x - 1) - 1/x + 1/2.
fn binet_bracket(x: f64) -> f64 {
    if x < 1e-3 {
        x / 12.0 - x * x * x / 720.0
    } else {
        1.0 / x.exp_m1() - 1.0 / x + 0.5
    }
}

pub fn pinch_decomposition(ell: f64, s: Complex64) -> Result<PinchDecomposition> {
    check_length(ell)?;
    if !(s.re > 0.0) || (s.im * ell).abs() >= PI {
        return Err(Error::Domain(format!("decomposition needs Re s > 0 and |Im s|ℓ < π, got s = {s}")));
    }
    let log_factor = log_zeta_factor(ell, s, 1e-16)?;
    let q = (-s * ell).exp();
    let l1q = ln_1p(-q);
    let log_term = l1q;
    let dilog_term = -PI * PI / (3.0 * ell) - 2.0 * s * l1q + 2.0 / ell * dilog(-exp_m1(-s * ell))?;
    let mut binet = Complex64::new(0.0, 0.0);
    let mut n = 1usize;
    loop {
        let x = n as f64 * ell;
        let e = (-s * x).exp();
        let term = e / n as f64 * binet_bracket(x);
        binet += term;
        // the bracket is below 1/2 and the weights decay geometrically
        let tail = (-s.re * x).exp() / (n as f64 * -(-s.re * ell).exp_m1());
        if tail < 1e-18 * (1.0 + binet.norm()) {
            break;
        }
        n += 1;
        if n > MAX_TERMS {
            return Err(Error::NonConvergence {
                what: "Binet series",
                detail: format!("ℓ = {ell}"),
            });
        }
    }
    let binet_term = -2.0 * binet;
    let residual = (log_factor - log_term - dilog_term - binet_term).norm();
    Ok(PinchDecomposition {
        log_factor,
        log_term,
        dilog_term,
        binet_term,
        residual,
    })
}

/// Z'_ℓ/Z_ℓ(s) as a k-sum and as an n-sum over multiples of the geodesic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogDerivative {
    pub k_sum: Complex64,
    pub n_sum: Complex64,
    pub residual: f64,
    pub k_terms: usize,
    pub n_terms: usize,
}

/// Z'/Z = Σ_k 2ℓ e^{-(s+k)ℓ}/(1 - e^{-(s+k)ℓ})
///      = (2s - 1) Σ_{n≥1} 2ℓ g_s(nℓ)/(2 sinh(nℓ/2)),  g_s(u) = e^{-(s-1/2)u}/(2s-1).
pub fn log_deriv_factor(ell: f64, s: Complex64, tol: f64) -> Result<LogDerivative> {
    check_length(ell)?;
    if !(s.re > 0.5) {
        return Err(Error::Domain(format!("log-derivative series need Re s > 1/2, got {s}")));
    }
    let one_minus_decay = -(-ell).exp_m1();
    let mut k_sum = Complex64::new(0.0, 0.0);
    let mut k = 0usize;
    loop {
        let x = (-(s.re + k as f64) * ell).exp();
        if x < 0.5 && 2.0 * ell * x / ((1.0 - x) * one_minus_decay) < tol {
            break;
        }
        let q = (-(s + k as f64) * ell).exp();
        k_sum += 2.0 * ell * q / (1.0 - q);
        k += 1;
        if k > MAX_TERMS {
            return Err(Error::NonConvergence {
                what: "log-derivative k-sum",
                detail: format!("ℓ = {ell}"),
            });
        }
    }
    let two_s = 2.0 * s - 1.0;
    let mut acc = Complex64::new(0.0, 0.0);
    let mut n = 1usize;
    loop {
        let u = n as f64 * ell;
        let x = (-s.re * u).exp();
        let damp = (-s.re * ell).exp();
        if x < 0.5 && 2.0 * ell * x / ((1.0 - (-u).exp()) * (1.0 - damp)) < tol {
            break;
        }
        let g = (-(s - 0.5) * u).exp() / two_s;
        acc += 2.0 * ell * g / (2.0 * (0.5 * u).sinh());
        n += 1;
        if n > MAX_TERMS {
            return Err(Error::NonConvergence {
                what: "log-derivative n-sum",
                detail: format!("ℓ = {ell}"),
            });
        }
    }
    let n_sum = two_s * acc;
    Ok(LogDerivative {
        k_sum,
        n_sum,
        residual: (k_sum - n_sum).norm(),
        k_terms: k,
        n_terms: n - 1,
    })
}

/// Z_ℓ(s) ℓ^{4s-2} Γ(s)² / (Z_ℓ(1-s) Γ(1-s)²), which tends to 1 as ℓ -> 0.
pub fn lhp_reduction_ratio(ell: f64, s: Complex64) -> Result<Complex64> {
    check_length(ell)?;
    let one = Complex64::new(1.0, 0.0);
    if s == one - s {
        return Ok(one);
    }
    let a = log_gamma_sq_zeta(ell, s, 1e-15)?;
    let b = log_gamma_sq_zeta(ell, one - s, 1e-15)?;
    Ok((a - b + (4.0 * s - 2.0) * ell.ln()).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn long_geodesic_factor_is_one() {
        let z = zeta_factor(50.0, c(2.0, 0.0), 1e-30).unwrap();
        assert!((z.value - 1.0).norm() < 1e-20);
        let d = log_deriv_factor(50.0, c(2.0, 0.0), 1e-30).unwrap();
        assert!(d.k_sum.norm() < 1e-20);
    }

    #[test]
    fn conjugation_symmetry() {
        let a = zeta_factor(0.5, c(1.3, 0.7), 1e-15).unwrap().value;
        let b = zeta_factor(0.5, c(1.3, -0.7), 1e-15).unwrap().value;
        assert!((a - b.conj()).norm() < 1e-14 * a.norm());
        let a = log_deriv_factor(0.7, c(1.2, 0.4), 1e-15).unwrap().k_sum;
        let b = log_deriv_factor(0.7, c(1.2, -0.4), 1e-15).unwrap().k_sum;
        assert!((a - b.conj()).norm() < 1e-13);
    }

    #[test]
    fn product_against_direct_multiplication() {
        let (ell, s) = (0.3, c(1.1, 0.2));
        let mut direct = c(1.0, 0.0);
        for k in 0..2000 {
            let f = 1.0 - (-(s + k as f64) * ell).exp();
            direct *= f * f;
        }
        let z = zeta_factor(ell, s, 1e-15).unwrap();
        assert!((z.value - direct).norm() < 1e-12 * direct.norm());
        assert!(z.error_bound < 1e-13);
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let (ell, s) = (1.0, c(2.0, 0.0));
        let h = 1e-5;
        let fd = (log_zeta_factor(ell, s + h, 1e-16).unwrap() - log_zeta_factor(ell, s - h, 1e-16).unwrap()) / (2.0 * h);
        let d = log_deriv_factor(ell, s, 1e-15).unwrap();
        assert!((fd - d.k_sum).norm() < 1e-6 * d.k_sum.norm());
        assert!(d.residual < 1e-10);
    }

    #[test]
    fn regularized_product_is_continuous_at_poles() {
        let ell = 0.4;
        for m in [0.0, 1.0, 2.0] {
            let at = log_gamma_sq_zeta(ell, c(-m, 0.0), 1e-15).unwrap().exp();
            let near = log_gamma_sq_zeta(ell, c(-m + 1e-7, 0.0), 1e-15).unwrap().exp();
            let mid = log_gamma_sq_zeta(ell, c(-m + 0.3, 0.0), 1e-15).unwrap().exp();
            let plain = (2.0 * log_gamma(c(-m + 0.3, 0.0)).unwrap() + log_zeta_factor(ell, c(-m + 0.3, 0.0), 1e-15).unwrap()).exp();
            assert!((at - near).norm() < 1e-5 * at.norm());
            assert!((mid - plain).norm() < 1e-10 * plain.norm());
        }
    }

    #[test]
    fn symmetric_point_ratio() {
        assert_eq!(lhp_reduction_ratio(0.1, c(0.5, 0.0)).unwrap(), c(1.0, 0.0));
    }

    #[test]
    fn decomposition_residual() {
        let d = pinch_decomposition(0.1, c(1.5, 0.0)).unwrap();
        assert!(d.residual < 1e-8, "{d:?}");
    }
}
