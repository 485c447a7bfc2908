use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point (x, a) of the model X_ℓ with metric (ℓ²+a²)dx² + da²/(ℓ²+a²).
/// The model parameter ℓ is passed alongside to the operations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CylinderPoint {
    pub x: f64,
    pub a: f64,
}

impl CylinderPoint {
    pub fn new(x: f64, a: f64) -> Self {
        CylinderPoint { x, a }
    }
}

/// An open interval with possibly infinite ends.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lower: f64,
    pub upper: f64,
}

impl Interval {
    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        if !(lower < upper) {
            return Err(Error::InvalidInterval { lower, upper });
        }
        Ok(Interval { lower, upper })
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower < x && x < self.upper
    }
}

/// ℓ/(2 sinh(ℓ/2)), continuous at ℓ = 0 with value 1.
pub fn collar_half_width(t: f64) -> f64 {
    if t == 0.0 {
        1.0
    } else {
        let h = 0.5 * t;
        if h < 1e-4 {
            1.0 / (1.0 + h * h / 6.0)
        } else {
            h / h.sinh()
        }
    }
}

/// Symmetric collar interval (-t/(2 sinh(t/2)), t/(2 sinh(t/2))), or (-1, 1) at t = 0.
pub fn collar_interval(t: f64) -> Result<Interval> {
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("collar parameter must be non-negative, got {t}")));
    }
    let w = collar_half_width(t);
    Interval::new(-w, w)
}

fn check_point(ell: f64, p: &CylinderPoint) -> Result<()> {
    if !(ell >= 0.0) {
        return Err(Error::Domain(format!("model parameter must be non-negative, got {ell}")));
    }
    if ell == 0.0 && p.a == 0.0 {
        return Err(Error::Domain("X_0 excludes a = 0".into()));
    }
    Ok(())
}

/// Point-pair invariant σ = 4 sinh²(d/2) on X_ℓ; +∞ across the two components
/// of X_0.
pub fn sigma(ell: f64, p1: &CylinderPoint, p2: &CylinderPoint) -> Result<f64> {
    check_point(ell, p1)?;
    check_point(ell, p2)?;
    let (a1, a2) = (p1.a, p2.a);
    let dx = p1.x - p2.x;
    let prod = a1 * a2;
    if ell == 0.0 {
        if prod < 0.0 {
            return Ok(f64::INFINITY);
        }
        return Ok((a1 - a2) * (a1 - a2) / prod + prod * dx * dx);
    }
    let l2 = ell * ell;
    let rho = ((l2 + a1 * a1) * (l2 + a2 * a2)).sqrt();
    let sh = (0.5 * ell * dx).sinh();
    // 2 (cosh(ℓΔx) - 1) ρ1ρ2/ℓ², written with sinh to stay accurate as ℓ -> 0.
    let fibre = if ell * dx.abs() < 1e-8 {
        rho * dx * dx
    } else {
        4.0 * sh * sh * rho / l2
    };
    let radial = if prod >= 0.0 {
        // 2[(ρ1ρ2 - a1a2)/ℓ² - 1] without cancellation.
        let x = l2 + (a1 - a2) * (a1 - a2) + prod;
        let num = (a1 - a2) * (a1 - a2) * (l2 + a1 * a1 + a2 * a2);
        2.0 * num / ((x + rho) * (rho + prod))
    } else {
        2.0 * ((rho - prod) / l2 - 1.0)
    };
    Ok(fibre + radial)
}

/// Hyperbolic distance on X_ℓ.
pub fn distance(ell: f64, p1: &CylinderPoint, p2: &CylinderPoint) -> Result<f64> {
    let s = sigma(ell, p1, p2)?;
    Ok(2.0 * (0.5 * s.sqrt()).asinh())
}

/// Isometry of X_ℓ onto the upper half-plane: e^{ℓx}(a, ℓ)/√(ℓ²+a²) for ℓ > 0,
/// and (x, ±1/a) on the two components of X_0.
pub fn model_to_halfplane(ell: f64, p: &CylinderPoint) -> Result<Complex64> {
    check_point(ell, p)?;
    if ell == 0.0 {
        return Ok(Complex64::new(p.x, 1.0 / p.a.abs()));
    }
    let rho = (ell * ell + p.a * p.a).sqrt();
    let e = (ell * p.x).exp();
    Ok(Complex64::new(e * p.a / rho, e * ell / rho))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn collar_values() {
        let i = collar_interval(0.0).unwrap();
        assert_eq!((i.lower, i.upper), (-1.0, 1.0));
        let i = collar_interval(2.0).unwrap();
        assert!((i.upper - 1.0 / 1f64.sinh()).abs() < 1e-15);
        let i = collar_interval(1e-6).unwrap();
        assert!((i.upper - 1.0).abs() < 1e-6);
    }

    #[test]
    fn sigma_examples() {
        let p = CylinderPoint::new(0.3, -0.7);
        assert_eq!(sigma(1.0, &p, &p).unwrap(), 0.0);
        let s = sigma(0.0, &CylinderPoint::new(0.0, 1.0), &CylinderPoint::new(1.0, 1.0)).unwrap();
        assert!((s - 1.0).abs() < 1e-15);
        let d = distance(0.8, &CylinderPoint::new(0.0, 0.0), &CylinderPoint::new(1.0, 0.0)).unwrap();
        assert!((d - 0.8).abs() < 1e-14);
        assert!(sigma(0.0, &CylinderPoint::new(0.0, 1.0), &CylinderPoint::new(0.0, -1.0))
            .unwrap()
            .is_infinite());
        assert!(sigma(0.0, &CylinderPoint::new(0.0, 0.0), &p).is_err());
    }

    #[test]
    fn halfplane_chart() {
        let z = model_to_halfplane(1.0, &CylinderPoint::new(0.0, 0.0)).unwrap();
        assert!((z - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        let z = model_to_halfplane(0.0, &CylinderPoint::new(0.5, 4.0)).unwrap();
        assert!((z - Complex64::new(0.5, 0.25)).norm() < 1e-15);
    }
}
