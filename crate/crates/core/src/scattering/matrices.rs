//! Matrix identities for approximate scattering pairs (C, D).

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::special::{log_gamma, rgamma};

use super::modes::{check_half_integer, check_mode_parameter};

pub type CMatrix = DMatrix<Complex64>;

/// Largest condition estimate accepted when inverting D.
pub const MAX_CONDITION: f64 = 1e12;

/// Ends of a scattering pair: labels and an involution. Self-paired ends are
/// phantom ends.
#[derive(Debug, Clone, PartialEq)]
pub struct Ends {
    pub labels: Vec<String>,
    pub iota: Vec<usize>,
}

impl Ends {
    pub fn new(labels: Vec<String>, iota: Vec<usize>) -> Result<Self> {
        if labels.len() != iota.len() {
            return Err(Error::Input("end labels and involution differ in length".into()));
        }
        for (i, &j) in iota.iter().enumerate() {
            if j >= iota.len() || iota[j] != i {
                return Err(Error::Input(format!("iota is not an involution at index {i}")));
            }
        }
        Ok(Ends { labels, iota })
    }

    /// The two ends (-, +) of a standalone cylinder, exchanged by (x,a) ↦ (-x,-a).
    pub fn cylinder() -> Self {
        Ends {
            labels: vec!["-".into(), "+".into()],
            iota: vec![1, 0],
        }
    }

    /// k self-paired phantom ends.
    pub fn phantom(k: usize) -> Self {
        Ends {
            labels: (0..k).map(|i| format!("p{i}")).collect(),
            iota: (0..k).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.iota.len()
    }

    pub fn is_empty(&self) -> bool {
        self.iota.is_empty()
    }
}

/// Σ(s): sec(πs) on the diagonal and 1 at the positions (i, ι(i)) with ι(i) ≠ i.
pub fn sigma_matrix(ends: &Ends, s: Complex64) -> Result<CMatrix> {
    check_half_integer(s)?;
    let sec = 1.0 / (PI * s).cos();
    let k = ends.len();
    let mut m = CMatrix::zeros(k, k);
    for i in 0..k {
        m[(i, i)] = sec;
        let j = ends.iota[i];
        if j != i {
            m[(i, j)] = Complex64::new(1.0, 0.0);
        }
    }
    Ok(m)
}

/// diag(ℓ_j^p), with 0 for ℓ_j = 0.
pub fn lambda_power(ell: &[f64], p: Complex64) -> Result<CMatrix> {
    let mut m = CMatrix::zeros(ell.len(), ell.len());
    for (i, &l) in ell.iter().enumerate() {
        if !(l >= 0.0) || !l.is_finite() {
            return Err(Error::Domain(format!("end length must be non-negative, got {l}")));
        }
        if l > 0.0 {
            m[(i, i)] = (p * l.ln()).exp();
        }
    }
    Ok(m)
}

/// γ(s) = (2s-1) 4^{-s} Γ(s)²/Γ(1/2+s)².
pub fn gamma_factor(s: Complex64) -> Result<Complex64> {
    check_mode_parameter(s)?;
    let r = rgamma(0.5 + s);
    let lg = log_gamma(s)?;
    Ok((2.0 * s - 1.0) * (-s * 4f64.ln() + 2.0 * lg).exp() * r * r)
}

/// D = 1 + γ(s) C Σ(s) λ^{2s-1}.
pub fn d_from_c(c: &CMatrix, ends: &Ends, ell: &[f64], s: Complex64) -> Result<CMatrix> {
    let k = ends.len();
    if c.nrows() != k || c.ncols() != k || ell.len() != k {
        return Err(Error::Input("C, ends and lengths must have matching sizes".into()));
    }
    let sig = sigma_matrix(ends, s)?;
    let lam = lambda_power(ell, 2.0 * s - 1.0)?;
    if lam.iter().all(|z| *z == Complex64::new(0.0, 0.0)) {
        return Ok(CMatrix::identity(k, k));
    }
    let g = gamma_factor(s)?;
    Ok(CMatrix::identity(k, k) + c * sig * lam * g)
}

/// Leading behaviour of C for Re s < 1/2 under pinching:
/// λ^{1-2s} (1-2s) 4^{-(1-s)} Γ(1-s)²/Γ(3/2-s)² Σ(1-s).
pub fn lhp_c_asymptote(ell: &[f64], ends: &Ends, s: Complex64) -> Result<CMatrix> {
    if !(s.re < 0.5) {
        return Err(Error::Domain(format!("the asymptote is stated for Re s < 1/2, got {s}")));
    }
    if ell.len() != ends.len() {
        return Err(Error::Input("lengths and ends differ in size".into()));
    }
    let g = gamma_factor(1.0 - s)?;
    Ok(lambda_power(ell, 1.0 - 2.0 * s)? * sigma_matrix(ends, 1.0 - s)? * g)
}

/// Ratio of the largest to the smallest singular value.
pub fn condition_estimate(m: &CMatrix) -> f64 {
    let sv = m.clone().svd(false, false).singular_values;
    let max = sv.iter().cloned().fold(0.0, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// C′ = D⁻¹C.
pub fn cprime(c: &CMatrix, d: &CMatrix) -> Result<CMatrix> {
    if !d.is_square() || d.nrows() != c.nrows() {
        return Err(Error::Input("C and D must be square of the same size".into()));
    }
    let condition = condition_estimate(d);
    if !(condition <= MAX_CONDITION) {
        return Err(Error::SingularMatrix { condition });
    }
    let lu = d.clone().lu();
    lu.solve(c).ok_or(Error::SingularMatrix { condition })
}

/// Largest entry modulus.
pub fn max_norm(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Frobenius norm.
pub fn frobenius(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// An approximate scattering pair at a single s.
#[derive(Debug, Clone, PartialEq)]
pub struct ScatteringPair {
    pub ends: Ends,
    pub ell: Vec<f64>,
    pub s: Complex64,
    pub c: CMatrix,
    pub d: CMatrix,
}

impl ScatteringPair {
    pub fn new(ends: Ends, ell: Vec<f64>, s: Complex64, c: CMatrix, d: CMatrix) -> Result<Self> {
        let k = ends.len();
        if ell.len() != k || c.shape() != (k, k) || d.shape() != (k, k) {
            return Err(Error::Input("scattering pair sizes do not match the ends".into()));
        }
        Ok(ScatteringPair { ends, ell, s, c, d })
    }

    /// max |C - Cᵗ|.
    pub fn symmetry_residual(&self) -> f64 {
        max_norm(&(&self.c - self.c.transpose()))
    }

    /// max |C Dᵗ - D C|.
    pub fn commutation_residual(&self) -> f64 {
        max_norm(&(&self.c * self.d.transpose() - &self.d * &self.c))
    }

    /// max |D - d_from_c(C)|.
    pub fn dcalc_residual(&self) -> Result<f64> {
        Ok(max_norm(&(&self.d - d_from_c(&self.c, &self.ends, &self.ell, self.s)?)))
    }

    /// max |(D - Dᵗ) - γ(s)[C, Σ(s)λ^{2s-1}]|.
    pub fn d_commutator_residual(&self) -> Result<f64> {
        let sl = sigma_matrix(&self.ends, self.s)? * lambda_power(&self.ell, 2.0 * self.s - 1.0)?;
        let g = gamma_factor(self.s)?;
        let comm = (&self.c * &sl - &sl * &self.c) * g;
        Ok(max_norm(&(&self.d - self.d.transpose() - comm)))
    }
}

/// One identity residual; `informational` marks identities that are only
/// asserted for finite-area inputs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residual {
    pub value: f64,
    pub informational: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityReport {
    pub cprime_symmetry: Residual,
    pub commutation: Residual,
    pub functional: Option<Residual>,
    pub cprime_inverse: Option<Residual>,
    pub unitarity: Option<Residual>,
}

/// Evaluates the identities of C′ = D⁻¹C. `reflected` is the pair at 1 - s;
/// `finite_area` selects whether the finite-area identities are binding.
pub fn identity_residuals(
    pair: &ScatteringPair,
    reflected: Option<&ScatteringPair>,
    finite_area: bool,
) -> Result<IdentityReport> {
    let cp = cprime(&pair.c, &pair.d)?;
    let info = !finite_area;
    let cprime_symmetry = Residual {
        value: max_norm(&(&cp - cp.transpose())),
        informational: false,
    };
    let commutation = Residual {
        value: pair.commutation_residual(),
        informational: false,
    };
    let (functional, cprime_inverse) = match reflected {
        Some(r) => {
            if (r.s - (1.0 - pair.s)).norm() > 1e-12 || r.c.shape() != pair.c.shape() {
                return Err(Error::Input("reflected pair must be taken at 1 - s with the same ends".into()));
            }
            let f = &pair.d * r.d.transpose() - &pair.c * &r.c;
            let cr = cprime(&r.c, &r.d)?;
            let k = pair.c.nrows();
            let inv = &cr * &cp - CMatrix::identity(k, k);
            (
                Some(Residual { value: max_norm(&f), informational: info }),
                Some(Residual { value: max_norm(&inv), informational: info }),
            )
        }
        None => (None, None),
    };
    let unitarity = if (pair.s.re - 0.5).abs() < 1e-14 {
        let k = cp.nrows();
        let u = cp.adjoint() * &cp - CMatrix::identity(k, k);
        Some(Residual { value: max_norm(&u), informational: info })
    } else {
        None
    };
    Ok(IdentityReport {
        cprime_symmetry,
        commutation,
        functional,
        cprime_inverse,
        unitarity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn sigma_shapes() {
        let s = c(0.3, 0.0);
        let sec = 1.0 / (PI * 0.3).cos();
        let m = sigma_matrix(&Ends::cylinder(), s).unwrap();
        assert_eq!(m[(0, 1)], c(1.0, 0.0));
        assert!((m[(0, 0)].re - sec).abs() < 1e-15);
        let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
        assert!((det.re - (sec - 1.0) * (sec + 1.0)).abs() < 1e-14);
        let p = sigma_matrix(&Ends::phantom(2), s).unwrap();
        assert_eq!(p[(0, 1)], c(0.0, 0.0));
        assert!(sigma_matrix(&Ends::cylinder(), c(1.5, 0.0)).is_err());
    }

    #[test]
    fn lambda_zero_entries() {
        let m = lambda_power(&[0.0, 0.5], c(2.0, 0.0)).unwrap();
        assert_eq!(m[(0, 0)], c(0.0, 0.0));
        assert!((m[(1, 1)].re - 0.25).abs() < 1e-15);
    }

    #[test]
    fn d_from_c_cases() {
        let ends = Ends::cylinder();
        let s = c(1.3, 0.2);
        let zero = CMatrix::zeros(2, 2);
        assert_eq!(d_from_c(&zero, &ends, &[1.0, 1.0], s).unwrap(), CMatrix::identity(2, 2));
        let cm = CMatrix::from_element(2, 2, c(0.3, -0.1));
        assert_eq!(d_from_c(&cm, &ends, &[0.0, 0.0], s).unwrap(), CMatrix::identity(2, 2));
        let ph = Ends::phantom(1);
        let one = CMatrix::from_element(1, 1, c(0.7, 0.0));
        let d = d_from_c(&one, &ph, &[0.4], s).unwrap();
        let want = 1.0 + gamma_factor(s).unwrap() * 0.7 / (PI * s).cos() * ((2.0 * s - 1.0) * 0.4f64.ln()).exp();
        assert!((d[(0, 0)] - want).norm() < 1e-14);
    }

    #[test]
    fn cprime_cases() {
        let cm = CMatrix::from_element(2, 2, c(0.3, 0.1));
        let two = CMatrix::identity(2, 2) * c(2.0, 0.0);
        assert_eq!(cprime(&CMatrix::zeros(2, 2), &two).unwrap(), CMatrix::zeros(2, 2));
        assert!(max_norm(&(cprime(&cm, &CMatrix::identity(2, 2)).unwrap() - &cm)) < 1e-15);
        assert!(matches!(cprime(&cm, &CMatrix::zeros(2, 2)), Err(Error::SingularMatrix { .. })));
    }

    #[test]
    fn asymptote_scaling() {
        let ends = Ends::cylinder();
        let s = c(0.2, 0.0);
        let a = lhp_c_asymptote(&[0.1, 0.1], &ends, s).unwrap();
        let b = lhp_c_asymptote(&[0.2, 0.2], &ends, s).unwrap();
        let f = 2f64.powf(0.6);
        for (x, y) in a.iter().zip(b.iter()) {
            assert!((y - x * f).norm() < 1e-14 * y.norm().max(1e-300));
        }
        let m = lhp_c_asymptote(&[0.1, 0.1], &ends, c(0.3, 0.0)).unwrap();
        assert!(m.iter().all(|z| z.norm() > 0.0 && z.norm().is_finite()));
        assert!(max_norm(&(&m - m.transpose())) == 0.0);
    }
}
