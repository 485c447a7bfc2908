//! Resolvent point-pair kernel k_s, cylinder kernels as deck-group sums, and
//! the bounds that certify their truncations.
//!
//! k_s(t) = (4^{s-1}/π) ∫₀¹ (x(1-x))^{s-1} (4x+t)^{-s} dx is the kernel of
//! (Δ - s(1-s))^{-1} on the hyperbolic plane as a function of
//! t = 4 sinh²(d/2). It has a logarithmic singularity at t = 0 and decays like
//! t^{-Re s}.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hyperbolic::{sigma, CylinderPoint};
use crate::special::{
    beta_real, gamma, hyp2f1, integrate, log_gamma, riemann_zeta_real, Domain, Endpoints, QuadratureSpec,
};

/// Smallest t accepted by the series method.
pub const SERIES_MIN_T: f64 = 0.05;

const MAX_SERIES_TERMS: usize = 200_000;
const MAX_DECK_TERMS: usize = 10_000_000;
const MAX_HS_TERMS: usize = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelMethod {
    /// Power series in 4/(4+t).
    Series,
    /// Adaptive quadrature of the defining integral.
    Quadrature,
}

fn check_s(s: Complex64) -> Result<()> {
    if !(s.re > 0.5) || !s.im.is_finite() {
        return Err(Error::Domain(format!("the resolvent kernel needs Re s > 1/2, got {s}")));
    }
    Ok(())
}

/// |k_s(t)| ≤ K_σ t^{-σ} with K_σ = 4^{σ-1} B(σ,σ)/π, σ = Re s.
pub fn kernel_bound_constant(sigma: f64) -> Result<f64> {
    if !(sigma > 0.5) {
        return Err(Error::Domain(format!("kernel bound needs Re s > 1/2, got {sigma}")));
    }
    Ok(4f64.powf(sigma - 1.0) * beta_real(sigma, sigma)? / PI)
}

/// k_s for a fixed s, with the s-dependent constants computed once.
#[derive(Debug, Clone, Copy)]
pub struct ResolventKernel {
    pub s: Complex64,
    /// Γ(s)²/Γ(2s).
    c0: Complex64,
    /// 4^{s-1}/π.
    pref: Complex64,
    /// Terms after which every coefficient ratio has modulus below one.
    settle: usize,
    tol: f64,
}

impl ResolventKernel {
    pub fn new(s: Complex64, tol: f64) -> Result<Self> {
        check_s(s)?;
        if !(tol > 0.0) {
            return Err(Error::Input(format!("kernel tolerance must be positive, got {tol}")));
        }
        let c0 = (2.0 * log_gamma(s)? - log_gamma(2.0 * s)?).exp();
        let pref = ((s - 1.0) * 4f64.ln()).exp() / PI;
        let settle = (4.0 * s.norm_sqr() + 4.0).ceil() as usize;
        Ok(ResolventKernel { s, c0, pref, settle, tol })
    }

    pub fn eval(&self, t: f64, method: KernelMethod) -> Result<Complex64> {
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::Domain(format!("k_s is evaluated at t > 0 only, got {t}")));
        }
        match method {
            KernelMethod::Series => self.series(t),
            KernelMethod::Quadrature => self.quadrature(t),
        }
    }

    /// Series for t ≥ [`SERIES_MIN_T`], quadrature below.
    pub fn eval_auto(&self, t: f64) -> Result<Complex64> {
        if t.is_infinite() {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let method = if t >= SERIES_MIN_T {
            KernelMethod::Series
        } else {
            KernelMethod::Quadrature
        };
        self.eval(t, method)
    }

    fn series(&self, t: f64) -> Result<Complex64> {
        if t < SERIES_MIN_T {
            return Err(Error::Domain(format!(
                "series method needs t >= {SERIES_MIN_T}, got {t}; use quadrature"
            )));
        }
        let s = self.s;
        let x = 4.0 / (4.0 + t);
        let mut term = self.c0;
        let mut sum = term;
        for j in 0..MAX_SERIES_TERMS {
            let jf = j as f64;
            term *= (s + jf) * (s + jf) / ((jf + 1.0) * (2.0 * s + jf)) * x;
            sum += term;
            if j >= self.settle && term.norm() * x / (1.0 - x) <= self.tol * sum.norm() {
                let scale = (-s * (4.0 + t).ln()).exp();
                return Ok(self.pref * scale * sum);
            }
        }
        Err(Error::NonConvergence {
            what: "resolvent kernel series",
            detail: format!("{MAX_SERIES_TERMS} terms at t = {t}"),
        })
    }

    fn quadrature(&self, t: f64) -> Result<Complex64> {
        let s = self.s;
        let f = |x: f64| {
            let w = (x * (1.0 - x)).ln();
            ((s - 1.0) * w - s * (4.0 * x + t).ln()).exp()
        };
        let alpha = 1.0 - s.re;
        let spec = QuadratureSpec::with_tolerances(self.tol, self.tol * 1e-6);
        let split = (0.25 * t).min(0.5);
        let (lo, hi) = if alpha > 0.0 {
            (Endpoints::lower(alpha), Endpoints::upper(alpha))
        } else {
            (Endpoints::REGULAR, Endpoints::REGULAR)
        };
        let a = integrate(f, Domain::Finite(0.0, split), lo, &spec)?;
        let b = integrate(f, Domain::Finite(split, 1.0), hi, &spec)?;
        Ok(self.pref * (a.value + b.value))
    }

    /// The normalized series coefficient Γ(s+j)²/(j! Γ(2s+j)), so that
    /// k_s(0⁺) diverges like Σ_j c_j/(4π).
    fn coefficients(&self, n: usize) -> Vec<Complex64> {
        let s = self.s;
        let mut out = Vec::with_capacity(n);
        let mut c = self.c0;
        for j in 0..n {
            out.push(c);
            let jf = j as f64;
            c *= (s + jf) * (s + jf) / ((jf + 1.0) * (2.0 * s + jf));
        }
        out
    }
}

/// k_s(t) by the requested method, relative tolerance `tol`.
pub fn point_pair_k(s: Complex64, t: f64, method: KernelMethod, tol: f64) -> Result<Complex64> {
    ResolventKernel::new(s, tol)?.eval(t, method)
}

/// k_s(0) - k_{s0}(0). Each term diverges logarithmically; the difference of
/// the series at 4/(4+t) = 1 converges like 1/J and is accelerated by
/// Richardson extrapolation in J.
pub fn kernel_difference_at_zero(s: Complex64, s0: Complex64) -> Result<Complex64> {
    let ks = ResolventKernel::new(s, 1e-14)?;
    let k0 = ResolventKernel::new(s0, 1e-14)?;
    let levels = 8;
    let base = 256usize;
    let n = base << (levels - 1);
    let cs = ks.coefficients(n);
    let c0 = k0.coefficients(n);
    let mut partial = Complex64::new(0.0, 0.0);
    let mut sums = Vec::with_capacity(levels);
    let mut next = base;
    for j in 0..n {
        partial += cs[j] - c0[j];
        if j + 1 == next {
            sums.push(partial);
            next *= 2;
        }
    }
    // Partial sums behave like S + a/J + b/J² + ...
    let mut table = sums;
    for order in 1..levels {
        let f = (1u64 << order) as f64;
        table = table.windows(2).map(|w| (f * w[1] - w[0]) / (f - 1.0)).collect();
        if table.len() == 1 {
            break;
        }
    }
    Ok(table[0] / (4.0 * PI))
}

/// A truncated sum with a certified bound on the omitted part.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CertifiedSum {
    pub value: Complex64,
    pub tail_bound: f64,
    pub terms: usize,
}

/// Bound on Σ_{|n|>N} |k_s(σ(p1, γⁿp2))| given σ ≥ ρ1ρ2 m² and, for ℓ > 0,
/// σ ≥ ρ1ρ2 (e^{ℓm}(1-e^{-ℓm}))²/ℓ², where m = |n + δ| ≥ N + 1/2.
fn deck_tail(ell: f64, rho: f64, big_k: f64, sig: f64, n: usize) -> f64 {
    let m = n as f64 + 0.5;
    let poly = 2.0 * big_k * rho.powf(-sig) * (m - 0.5).max(0.5).powf(1.0 - 2.0 * sig) / (2.0 * sig - 1.0);
    if ell == 0.0 {
        return poly;
    }
    let shrink = (1.0 - (-ell * m).exp()).powi(2);
    let exp = 2.0 * big_k * (rho * shrink / (ell * ell)).powf(-sig) * (-sig * ell * m).exp()
        / (1.0 - (-sig * ell).exp());
    poly.min(exp)
}

/// Cylinder kernel K_s^ℓ(p1, p2) = Σ_n k_s(σ_ℓ(p1, γⁿ p2)), γ: x ↦ x + 1,
/// with the omitted tail bounded by `tol`.
pub fn cylinder_kernel(
    ell: f64,
    s: Complex64,
    p1: &CylinderPoint,
    p2: &CylinderPoint,
    tol: f64,
) -> Result<CertifiedSum> {
    let kernel = ResolventKernel::new(s, (1e-2 * tol).clamp(1e-12, 1e-8))?;
    if ell == 0.0 && p1.a * p2.a < 0.0 {
        sigma(ell, p1, p2)?;
        return Ok(CertifiedSum {
            value: Complex64::new(0.0, 0.0),
            tail_bound: 0.0,
            terms: 0,
        });
    }
    let rho = if ell == 0.0 {
        (p1.a * p2.a).abs()
    } else {
        ((ell * ell + p1.a * p1.a) * (ell * ell + p2.a * p2.a)).sqrt()
    };
    let sig = s.re;
    let big_k = kernel_bound_constant(sig)?;
    let mut n = 1usize;
    while deck_tail(ell, rho, big_k, sig, n) > tol {
        n *= 2;
        if n > MAX_DECK_TERMS {
            return Err(Error::TailNotCertifiable(format!(
                "deck sum at a1 = {}, a2 = {} needs more than {MAX_DECK_TERMS} terms",
                p1.a, p2.a
            )));
        }
    }
    // Smallest N with certified tail, by bisection on [n/2, n].
    let (mut lo, mut hi) = (n / 2, n);
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if deck_tail(ell, rho, big_k, sig, mid) > tol {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let n = hi as i64;
    let shift = (p1.x - p2.x).round() as i64;
    let mut value = Complex64::new(0.0, 0.0);
    // Outermost terms first.
    for m in (0..=n).rev() {
        for k in if m == 0 { vec![0] } else { vec![m, -m] } {
            let q = CylinderPoint::new(p2.x + (shift + k) as f64, p2.a);
            let t = sigma(ell, p1, &q)?;
            if t == 0.0 {
                return Err(Error::Domain("cylinder kernel evaluated on the diagonal".into()));
            }
            value += kernel.eval_auto(t)?;
        }
    }
    Ok(CertifiedSum {
        value,
        tail_bound: deck_tail(ell, rho, big_k, sig, n as usize),
        terms: (2 * n + 1) as usize,
    })
}

/// The function g_ℓ(a1, a2, r) bounding one-dimensional integrals of
/// (1 + σ_ℓ)^{-r}.
pub fn g_bound(ell: f64, a1: f64, a2: f64, r: f64) -> Result<f64> {
    if !(r > 0.5) {
        return Err(Error::Domain(format!("g_bound needs r > 1/2, got {r}")));
    }
    if !(ell >= 0.0) {
        return Err(Error::Domain(format!("ℓ must be non-negative, got {ell}")));
    }
    let prod = a1 * a2;
    let diff2 = (a1 - a2) * (a1 - a2);
    if ell == 0.0 {
        if prod == 0.0 {
            return Err(Error::Domain("g_0 needs a1 a2 ≠ 0".into()));
        }
        if prod < 0.0 {
            return Ok(0.0);
        }
        return Ok((prod + diff2).powf(0.5 - r) * prod.powf(r - 1.0));
    }
    let l2 = ell * ell;
    let p = l2 + prod;
    let q = p * p + l2 * diff2;
    let root = q.sqrt();
    // (2/ℓ²)(√Q - P) without cancellation when P > 0.
    let gap = if p > 0.0 {
        2.0 * diff2 / (root + p)
    } else {
        2.0 * (root - p) / l2
    };
    Ok((1.0 + gap).powf(0.5 - r) * q.powf(-0.25))
}

/// Both sides of the Hilbert-Schmidt inequality
/// ∫₀¹∫₀¹ |h_ℓ|² ≤ √π Γ(2r-1/2)/Γ(2r) g_ℓ(2r) + π Γ(r-1/2)²/Γ(r)² g_ℓ(r)²,
/// h_ℓ(z1, z2) = Σ_m (1 + σ_ℓ(z1, γᵐ z2))^{-r}. Returns (upper bound of lhs, rhs).
pub fn hilbert_schmidt_sides(ell: f64, a1: f64, a2: f64, r: f64) -> Result<(f64, f64)> {
    let g1 = g_bound(ell, a1, a2, 2.0 * r)?;
    let g2 = g_bound(ell, a1, a2, r)?;
    let gr = |z: f64| Ok::<f64, Error>(gamma(Complex64::new(z, 0.0))?.re);
    let rhs = PI.sqrt() * gr(2.0 * r - 0.5)? / gr(2.0 * r)? * g1
        + PI * (gr(r - 0.5)? / gr(r)?).powi(2) * g2 * g2;
    if ell == 0.0 && a1 * a2 < 0.0 {
        return Ok((0.0, rhs));
    }
    let rho = if ell == 0.0 {
        (a1 * a2).abs()
    } else {
        ((ell * ell + a1 * a1) * (ell * ell + a2 * a2)).sqrt()
    };
    let p1 = CylinderPoint::new(0.0, a1);
    // f(x) = (1 + σ(p1, (x, a2)))^{-r} = (A + fibre(x))^{-r} is even and
    // decreasing in |x|, with fibre(x) ≥ ρx² and, for ℓ > 0,
    // fibre(x) ≥ ρ e^{ℓx}(1 - e^{-ℓx})²/ℓ².
    let big_a = 1.0 + sigma(ell, &p1, &CylinderPoint::new(0.0, a2))?;
    // ∫_y^∞ (A + ρx²)^{-r} dx = A^{-r}√(A/ρ) y'^{1-2r}/(2r-1) F(r, r-1/2; r+1/2; -1/y'²), y' = y√(ρ/A).
    let algebraic = |y: f64| -> f64 {
        let yp = y * (rho / big_a).sqrt();
        let one = Complex64::new(1.0, 0.0);
        let f = hyp2f1(r * one, (r - 0.5) * one, (r + 0.5) * one, Complex64::new(-1.0 / (yp * yp), 0.0));
        f.map_or(f64::INFINITY, |f| {
            big_a.powf(-r) * (big_a / rho).sqrt() * yp.powf(1.0 - 2.0 * r) / (2.0 * r - 1.0) * f.re
        })
    };
    let exponential = |y: f64| -> f64 {
        if ell == 0.0 {
            return f64::INFINITY;
        }
        (ell * ell / rho).powf(r) * (1.0 - (-ell * y).exp()).powf(-2.0 * r) * (-r * ell * y).exp() / (r * ell)
    };
    // Upper bound of ∫_y^∞ f.
    let tail_integral = |y: f64| algebraic(y).min(exponential(y));
    // Σ_{|m|>N} f(u+m) ≤ ∫_{N+u}^∞ f + ∫_{N-u}^∞ f for u ∈ [0, 1], and the
    // bound exceeds the true tail by at most 2 f(N-1) at ℓ = 0. For ℓ > 0 the
    // whole bound is required to be small.
    let slack = |n: usize| {
        let y = n as f64 - 1.0;
        if ell == 0.0 {
            2.0 * (big_a + rho * y * y).powf(-r)
        } else {
            2.0 * tail_integral(y)
        }
    };
    let target = 1e-7 * rhs.sqrt();
    let mut n = 2usize;
    while slack(n) > target {
        n *= 2;
        if n > MAX_HS_TERMS {
            return Err(Error::TailNotCertifiable(format!(
                "Hilbert-Schmidt sum at a1 = {a1}, a2 = {a2}, r = {r}"
            )));
        }
    }
    let nf = n as f64;
    // The double integral depends on x2 - x1 only, so it is ∫₀¹ |h(u)|² du;
    // with the omitted terms replaced by their upper bound it bounds lhs above.
    let h = |u: f64| -> f64 {
        let mut acc = 0.0;
        for m in (-(n as i64)..=(n as i64)).rev() {
            let q = CylinderPoint::new(u + m as f64, a2);
            let t = sigma(ell, &p1, &q).unwrap_or(f64::INFINITY);
            acc += (1.0 + t).powf(-r);
        }
        (acc + tail_integral(nf + u) + tail_integral(nf - u)).powi(2)
    };
    let spec = QuadratureSpec::with_tolerances(1e-10, 1e-14);
    let lhs = integrate(|u| Complex64::new(h(u), 0.0), Domain::Finite(0.0, 1.0), Endpoints::REGULAR, &spec)?;
    Ok((lhs.value.re + lhs.error_estimate, rhs))
}

/// σ_ℓ(0, a, n, a) = 4 sinh²(nℓ/2)(ℓ²+a²)/ℓ², and a²n² at ℓ = 0.
pub fn translate_sigma(ell: f64, a: f64, n: u64) -> f64 {
    let nf = n as f64;
    if ell == 0.0 {
        return a * a * nf * nf;
    }
    let sh = (0.5 * nf * ell).sinh();
    4.0 * sh * sh * (ell * ell + a * a) / (ell * ell)
}

/// Σ_{n≠0} k_s(σ_ℓ(0,a,n,a)), truncated once the remaining terms are bounded
/// by `tail_tol`. Returns the sum and the tail bound.
pub fn fibre_sum(kernel: &ResolventKernel, ell: f64, a: f64, tail_tol: f64) -> Result<(Complex64, f64)> {
    let sig = kernel.s.re;
    let big_k = kernel_bound_constant(sig)?;
    let base = ell * ell + a * a;
    if base == 0.0 {
        return Err(Error::Domain("fibre sum needs a ≠ 0 when ℓ = 0".into()));
    }
    // Omitted part for n > N: σ_n ≥ base·n² and σ_n ≥ base e^{nℓ}(1-e^{-nℓ})²/ℓ².
    let tail = |n: u64| {
        let nf = n as f64;
        let poly = 2.0 * big_k * base.powf(-sig) * nf.powf(1.0 - 2.0 * sig) / (2.0 * sig - 1.0);
        if ell == 0.0 {
            return poly;
        }
        let shrink = (1.0 - (-(nf + 1.0) * ell).exp()).powi(2);
        let exp = 2.0 * big_k * (base * shrink / (ell * ell)).powf(-sig) * (-sig * ell * (nf + 1.0)).exp()
            / (1.0 - (-sig * ell).exp());
        poly.min(exp)
    };
    let mut sum = Complex64::new(0.0, 0.0);
    let mut n = 0u64;
    loop {
        n += 1;
        sum += kernel.eval_auto(translate_sigma(ell, a, n))?;
        let bound = tail(n);
        if bound <= tail_tol {
            return Ok((2.0 * sum, bound));
        }
        if n as usize > MAX_DECK_TERMS {
            return Err(Error::TailNotCertifiable(format!("fibre sum at a = {a}")));
        }
    }
}

/// ∫_A^∞ Σ_{n≠0} k_s(σ_ℓ(0,a,n,a)) da with certified truncations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RemainderIntegral {
    pub value: Complex64,
    /// Upper end B of the integrated interval.
    pub cutoff: f64,
    /// Bound on the omitted ∫_B^∞.
    pub a_tail_bound: f64,
    /// Bound on the omitted n-tails integrated over [A, B].
    pub n_tail_bound: f64,
    pub quadrature_error: f64,
}

impl RemainderIntegral {
    pub fn error_bound(&self) -> f64 {
        self.a_tail_bound + self.n_tail_bound + self.quadrature_error
    }
}

/// K_σ ζ(2σ) B^{1-2σ}/(σ - 1/2), the bound on ∫_B^∞ Σ_{n≠0}|k_s(σ_ℓ(0,a,n,a))| da.
pub fn remainder_a_tail_bound(sigma: f64, b: f64) -> Result<f64> {
    Ok(kernel_bound_constant(sigma)? * riemann_zeta_real(2.0 * sigma)? * b.powf(1.0 - 2.0 * sigma)
        / (sigma - 0.5))
}

pub fn remainder_integral(ell: f64, s: Complex64, a_min: f64, tol: f64) -> Result<RemainderIntegral> {
    if !(a_min > 0.0) || !a_min.is_finite() {
        return Err(Error::Domain(format!("remainder integral needs A > 0, got {a_min}")));
    }
    if !(ell >= 0.0) {
        return Err(Error::Domain(format!("ℓ must be non-negative, got {ell}")));
    }
    let kernel = ResolventKernel::new(s, (1e-3 * tol).clamp(1e-12, 1e-8))?;
    let sig = s.re;
    let big_k = kernel_bound_constant(sig)?;
    let zeta = riemann_zeta_real(2.0 * sig)?;
    let b = ((0.25 * tol * (sig - 0.5)) / (big_k * zeta))
        .powf(1.0 / (1.0 - 2.0 * sig))
        .max(2.0 * a_min);
    let a_tail_bound = remainder_a_tail_bound(sig, b)?;
    // Local n-tail budget (tol/4)·A/a² integrates to at most tol/4.
    let quarter = 0.25 * tol;
    let failure = std::cell::RefCell::new(None);
    let f = |v: f64| {
        let a = v.exp();
        match fibre_sum(&kernel, ell, a, quarter * a_min / (a * a)) {
            Ok((value, _)) => value * a,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                Complex64::new(0.0, 0.0)
            }
        }
    };
    let spec = QuadratureSpec::with_tolerances(1e-12, 0.25 * tol);
    let r = integrate(f, Domain::Finite(a_min.ln(), b.ln()), Endpoints::REGULAR, &spec)?;
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(RemainderIntegral {
        value: r.value,
        cutoff: b,
        a_tail_bound,
        n_tail_bound: quarter * (1.0 - a_min / b),
        quadrature_error: r.error_estimate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn log_closed_form_at_one() {
        for t in [0.5f64, 1.0, 5.0] {
            let want = (1.0 + 4.0 / t).ln() / (4.0 * PI);
            for m in [KernelMethod::Series, KernelMethod::Quadrature] {
                let v = point_pair_k(c(1.0, 0.0), t, m, 1e-13).unwrap();
                assert!((v.re - want).abs() < 1e-12 && v.im.abs() < 1e-15, "{m:?} {t}: {v}");
            }
        }
    }

    #[test]
    fn complex_reference() {
        // mpmath quadrature of the defining integral
        let want = c(0.009_197_059_241_452_3, -0.044_524_513_860_543_23);
        for m in [KernelMethod::Series, KernelMethod::Quadrature] {
            let v = point_pair_k(c(1.3, 0.8), 2.0, m, 1e-12).unwrap();
            assert!((v - want).norm() < 1e-13, "{m:?} {v}");
        }
    }

    #[test]
    fn series_domain() {
        assert!(matches!(
            point_pair_k(c(1.5, 0.0), 0.01, KernelMethod::Series, 1e-10),
            Err(Error::Domain(_))
        ));
        assert!(point_pair_k(c(1.5, 0.0), 0.0, KernelMethod::Quadrature, 1e-10).is_err());
        assert!(point_pair_k(c(0.4, 0.0), 1.0, KernelMethod::Quadrature, 1e-10).is_err());
    }

    #[test]
    fn difference_at_zero_matches_digamma() {
        let v = kernel_difference_at_zero(c(2.0, 0.0), c(3.0, 0.0)).unwrap();
        assert!((v.re - 1.0 / (4.0 * PI)).abs() < 1e-11, "{v}");
        let (s, s0) = (c(1.3, 0.7), c(2.5, -0.2));
        let want = (crate::special::digamma(s0).unwrap() - crate::special::digamma(s).unwrap()) / (2.0 * PI);
        let v = kernel_difference_at_zero(s, s0).unwrap();
        assert!((v - want).norm() < 1e-10, "{v} {want}");
    }

    #[test]
    fn g_bound_examples() {
        assert!((g_bound(0.0, 1.7, 1.7, 1.3).unwrap() - 1.0 / 1.7).abs() < 1e-15);
        assert_eq!(g_bound(0.0, 1.0, -2.0, 1.3).unwrap(), 0.0);
        assert!(g_bound(0.5, 1.0, 2.0, 0.5).is_err());
        for a1 in [0.3, 1.0, 2.5] {
            for a2 in [0.2, 1.0, 3.0] {
                for r in [0.8, 1.5, 3.0] {
                    let g = |l: f64| g_bound(l, a1, a2, r).unwrap();
                    assert!((g(1e-7) - g(0.0)).abs() < 1e-9 * g(0.0), "{a1} {a2} {r}");
                }
            }
            let g = |l: f64| g_bound(l, a1, a1, 1.5).unwrap();
            assert!(g(0.5) < g(0.1) && g(0.1) < g(0.0));
        }
        // Off the diagonal the ℓ-dependence can go either way.
        assert!(g_bound(0.5, 1.0, 0.2, 3.0).unwrap() > g_bound(0.1, 1.0, 0.2, 3.0).unwrap());
        assert!(g_bound(0.5, 1.0, 0.2, 0.8).unwrap() < g_bound(0.1, 1.0, 0.2, 0.8).unwrap());
    }

    #[test]
    fn remainder_reference() {
        // mpmath: ∫_1^∞ 2 Σ_{n≥1} k_2(4 sinh²(n/2)(1+a²)) da
        let r = remainder_integral(1.0, c(2.0, 0.0), 1.0, 1e-10).unwrap();
        assert!((r.value.re - 0.025_904_045_527_859_69).abs() < 1e-9, "{r:?}");
        let r = remainder_integral(1.0, c(1.5, 0.5), 0.5, 1e-10).unwrap();
        assert!((r.value - c(0.045_398_699_093_495_85, -0.112_975_990_286_278_82)).norm() < 1e-9, "{r:?}");
    }

    #[test]
    fn remainder_tail_bound() {
        let b = remainder_a_tail_bound(1.5, 10.0).unwrap();
        assert!(b <= riemann_zeta_real(3.0).unwrap() * 1e-2);
    }
}
