//! The Selberg transform h ↔ g ↔ Q ↔ k:
//!
//! Q(w) = ∫_w^∞ k(t)(t-w)^{-1/2} dt,  g(u) = Q(e^u + e^{-u} - 2),
//! h(ξ) = ∫ g(u) e^{iξu} du,  k(t) = -(1/π) ∫_t^∞ Q'(w)(w-t)^{-1/2} dw.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::{kernel_difference_at_zero, ResolventKernel};
use crate::special::{gauss_legendre, integrate, Domain, Endpoints, QuadratureSpec, TailDecay};

/// A complex function of one real variable.
pub type RealFn = Arc<dyn Fn(f64) -> Result<Complex64> + Send + Sync>;

const PANEL_NODES: usize = 16;
const PANEL_WIDTH: f64 = 0.25;
const MAX_CUTOFF: f64 = 4000.0;
/// Allowed growth of a sampled decay constant before the hypothesis is rejected.
const DECAY_SLACK: f64 = 10.0;

/// Declared decay of the spectral function h.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectralDecay {
    /// |h(ξ)| ≤ C e^{-δ|ξ|}, from analyticity of g in the strip |Im u| < δ.
    Exponential(f64),
    /// |h(ξ)| ≤ C |ξ|^{-p} with ξ|h(ξ)| eventually monotone, p > 3.
    Algebraic(f64),
}

/// |f(x)| ≤ constant · e^{-rate x} for x ≥ 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExpBound {
    pub constant: f64,
    pub rate: f64,
}

/// A transform-compatible triple with the intermediate Q and its derivative.
/// `rho` is the decay parameter: |g(u)| ≤ C e^{-(1/2+ρ)|u|}, |k(t)| ≤ C(1+t)^{-(1+ρ)}.
#[derive(Clone)]
pub struct SelbergTriple {
    pub h: RealFn,
    pub g: RealFn,
    pub q: RealFn,
    pub dq: RealFn,
    pub k: RealFn,
    pub decay: SpectralDecay,
    pub rho: f64,
}

impl fmt::Debug for SelbergTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SelbergTriple")
            .field("decay", &self.decay)
            .field("rho", &self.rho)
            .finish_non_exhaustive()
    }
}

impl SelbergTriple {
    pub fn h(&self, xi: f64) -> Result<Complex64> {
        (self.h)(xi)
    }

    pub fn g(&self, u: f64) -> Result<Complex64> {
        (self.g)(u)
    }

    pub fn q(&self, w: f64) -> Result<Complex64> {
        (self.q)(w)
    }

    pub fn dq(&self, w: f64) -> Result<Complex64> {
        (self.dq)(w)
    }

    pub fn k(&self, t: f64) -> Result<Complex64> {
        (self.k)(t)
    }

    /// Largest sampled |g(u)| e^{(1/2+ρ)|u|} and |k(t)| (1+t)^{1+ρ}.
    pub fn bound_samples(&self, us: &[f64], ts: &[f64]) -> Result<(f64, f64)> {
        let mut gmax: f64 = 0.0;
        for &u in us {
            gmax = gmax.max(self.g(u)?.norm() * ((0.5 + self.rho) * u.abs()).exp());
        }
        let mut kmax: f64 = 0.0;
        for &t in ts {
            kmax = kmax.max(self.k(t)?.norm() * (1.0 + t).powf(1.0 + self.rho));
        }
        Ok((gmax, kmax))
    }
}

/// Input of [`transform_chain`].
#[derive(Clone)]
pub enum ChainInput {
    /// Start from k; h is analytic data in the strip of width `strip`.
    K { k: RealFn, rho: f64, strip: f64 },
    /// Start from an even h.
    H { h: RealFn, decay: SpectralDecay, rho: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChainSpec {
    /// Absolute accuracy target for each stage.
    pub tol: f64,
}

impl Default for ChainSpec {
    fn default() -> Self {
        ChainSpec { tol: 1e-10 }
    }
}

/// u with e^u + e^{-u} - 2 = w.
pub fn u_of_w(w: f64) -> f64 {
    2.0 * (0.5 * w.sqrt()).asinh()
}

/// e^u + e^{-u} - 2.
pub fn w_of_u(u: f64) -> f64 {
    let s = (0.5 * u).sinh();
    4.0 * s * s
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// u / sinh u.
fn u_over_sinh(u: f64) -> f64 {
    if u.abs() < 1e-4 {
        1.0 - u * u / 6.0
    } else {
        u / u.sinh()
    }
}

/// Composite Gauss-Legendre rule on [0, cutoff] with samples of an even function.
struct SampledRule {
    nodes: Vec<f64>,
    weighted: Vec<Complex64>,
}

impl SampledRule {
    fn build(f: &RealFn, cutoff: f64) -> Result<Self> {
        let (x, w) = gauss_legendre(PANEL_NODES);
        let panels = (cutoff / PANEL_WIDTH).ceil().max(1.0) as usize;
        let width = cutoff / panels as f64;
        let mut nodes = Vec::with_capacity(panels * PANEL_NODES);
        let mut weighted = Vec::with_capacity(panels * PANEL_NODES);
        for p in 0..panels {
            let center = (p as f64 + 0.5) * width;
            for (xi, wi) in x.iter().zip(&w) {
                let node = center + 0.5 * width * xi;
                nodes.push(node);
                weighted.push(0.5 * width * wi * f(node)?);
            }
        }
        Ok(SampledRule { nodes, weighted })
    }

    /// Σ w_i f(x_i) φ(x_i).
    fn sum(&self, phi: impl Fn(f64) -> f64) -> Complex64 {
        self.nodes.iter().zip(&self.weighted).map(|(&x, &fw)| fw * phi(x)).sum()
    }
}

fn check_finite_positive(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0) || !v.is_finite() {
        return Err(Error::Input(format!("{name} must be positive, got {v}")));
    }
    Ok(())
}

/// Largest sampled |f(x)| e^{rate x} on the grid.
fn exp_constant(f: &RealFn, rate: f64, grid: &[f64]) -> Result<f64> {
    let mut m: f64 = 0.0;
    for &x in grid {
        m = m.max(f(x)?.norm() * (rate * x).exp());
    }
    Ok(m)
}

fn grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step).round() as usize;
    (0..=n).map(|i| lo + i as f64 * step).collect()
}

/// Cutoff U with constant · e^{-rate U} · poly(U) ≤ tol, where poly bounds the
/// integrated weight, verified by sampling f beyond U.
fn exponential_cutoff(
    f: &RealFn,
    rate: f64,
    constant: f64,
    tol: f64,
    tail: impl Fn(f64) -> f64,
    what: &str,
) -> Result<f64> {
    let mut x = 1.0;
    while constant * tail(x) > tol {
        x += 0.5;
        if x > MAX_CUTOFF {
            return Err(Error::TailNotCertifiable(format!("{what} cutoff beyond {MAX_CUTOFF}")));
        }
    }
    for probe in [x, x + 1.0, x + 3.0] {
        let raw = f(probe)?.norm();
        if raw > tol && raw * (rate * probe).exp() > DECAY_SLACK * constant {
            return Err(Error::Domain(format!(
                "decay hypothesis violated: {what} sampled at {probe} exceeds the declared bound"
            )));
        }
    }
    Ok(x)
}

/// h sampled on [0, Ξ] with Ξ chosen so that the omitted part of the inverse
/// transforms is below `tol`.
fn spectral_rule(h: &RealFn, decay: SpectralDecay, tol: f64) -> Result<SampledRule> {
    let cutoff = match decay {
        SpectralDecay::Exponential(delta) => {
            check_finite_positive("strip width δ", delta)?;
            let m = exp_constant(h, delta, &grid(0.0, 10.0, 0.5))?;
            // ∫_Ξ^∞ ξ² e^{-δξ} dξ
            let tail = |x: f64| (-delta * x).exp() * (x * x / delta + 2.0 * x / (delta * delta) + 2.0 / delta.powi(3));
            exponential_cutoff(h, delta, m, tol, tail, "h")?
        }
        SpectralDecay::Algebraic(p) => {
            if !(p > 3.0) {
                return Err(Error::Domain(format!("algebraic spectral decay needs p > 3, got {p}")));
            }
            let mut m: f64 = 0.0;
            for x in grid(1.0, 20.0, 0.5) {
                m = m.max(h(x)?.norm() * x.powf(p));
            }
            // The oscillatory tail of ∫ ξ h(ξ) sin(ξu) dξ is at most 2Ξ|h(Ξ)|/u, so the
            // omitted part of Q' is below tol wherever u sinh u ≥ 1.
            let x = (m / (PI * tol)).powf(1.0 / (p - 1.0)).clamp(20.0, MAX_CUTOFF);
            for probe in [x, 2.0 * x] {
                let raw = h(probe)?.norm();
                if raw > tol && raw * probe.powf(p) > DECAY_SLACK * m {
                    return Err(Error::Domain(format!(
                        "decay hypothesis violated: h sampled at {probe} exceeds the declared bound"
                    )));
                }
            }
            x
        }
    };
    SampledRule::build(h, cutoff)
}

/// g, Q, Q' and k from a sampled h.
fn inverse_from_rule(rule: Arc<SampledRule>, rho: f64, tol: f64) -> (RealFn, RealFn, RealFn, RealFn) {
    let r = rule.clone();
    let g: RealFn = Arc::new(move |u: f64| Ok(r.sum(|xi| (xi * u).cos()) / PI));
    let g2 = g.clone();
    let q: RealFn = Arc::new(move |w: f64| {
        if !(w >= 0.0) {
            return Err(Error::Domain(format!("Q needs w ≥ 0, got {w}")));
        }
        g2(u_of_w(w))
    });
    // Q'(w) = g'(u)/(2 sinh u) = -(1/2π) (u/sinh u) ∫₀^∞ ξ² h(ξ) sinc(ξu) dξ.
    let r = rule;
    let dq: RealFn = Arc::new(move |w: f64| {
        if !(w >= 0.0) {
            return Err(Error::Domain(format!("Q' needs w ≥ 0, got {w}")));
        }
        let u = u_of_w(w);
        Ok(-r.sum(|xi| xi * xi * sinc(xi * u)) * u_over_sinh(u) / (2.0 * PI))
    });
    let k = abel_inverse(dq.clone(), rho, tol);
    (g, q, dq, k)
}

/// k(t) = -(1/π) ∫_t^∞ Q'(w)(w-t)^{-1/2} dw.
fn abel_inverse(dq: RealFn, rho: f64, tol: f64) -> RealFn {
    Arc::new(move |t: f64| {
        if !(t >= 0.0) {
            return Err(Error::Domain(format!("k needs t ≥ 0, got {t}")));
        }
        let failure = std::cell::RefCell::new(None);
        let f = |w: f64| match dq(w) {
            Ok(v) => v / (w - t).sqrt(),
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                Complex64::new(0.0, 0.0)
            }
        };
        let spec = QuadratureSpec::with_tolerances(1e-12, tol).with_decay(TailDecay::Algebraic(2.0 + rho));
        let r = integrate(f, Domain::UpperTail(t), Endpoints::lower(0.5), &spec)?;
        if let Some(e) = failure.into_inner() {
            return Err(e);
        }
        Ok(-r.value / PI)
    })
}

/// Q(w) = ∫_w^∞ k(t)(t-w)^{-1/2} dt.
fn abel_forward(k: RealFn, rho: f64, tol: f64) -> RealFn {
    Arc::new(move |w: f64| {
        if !(w >= 0.0) {
            return Err(Error::Domain(format!("Q needs w ≥ 0, got {w}")));
        }
        let failure = std::cell::RefCell::new(None);
        let f = |t: f64| match k(t) {
            Ok(v) => v / (t - w).sqrt(),
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                Complex64::new(0.0, 0.0)
            }
        };
        let spec = QuadratureSpec::with_tolerances(1e-12, tol).with_decay(TailDecay::Algebraic(1.5 + rho));
        let r = integrate(f, Domain::UpperTail(w), Endpoints::lower(0.5), &spec)?;
        if let Some(e) = failure.into_inner() {
            return Err(e);
        }
        Ok(r.value)
    })
}

fn check_rho(rho: f64) -> Result<()> {
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(Error::Domain(format!("decay parameter ρ must be positive, got {rho}")));
    }
    Ok(())
}

/// The full chain from either end. Functions are evaluated on demand; the
/// Fourier steps use composite Gauss-Legendre rules truncated by the declared
/// decay, and the Abel steps use the order-1/2 endpoint quadrature.
pub fn transform_chain(input: ChainInput, spec: ChainSpec) -> Result<SelbergTriple> {
    check_finite_positive("chain tolerance", spec.tol)?;
    match input {
        ChainInput::K { k, rho, strip } => {
            check_rho(rho)?;
            check_finite_positive("strip width δ", strip)?;
            let ts = [0.0, 1.0, 10.0, 100.0, 1000.0];
            let weighted: Vec<f64> = ts
                .iter()
                .map(|&t| Ok(k(t)?.norm() * (1.0 + t).powf(1.0 + rho)))
                .collect::<Result<_>>()?;
            let head = weighted[..3].iter().cloned().fold(0.0, f64::max);
            if weighted[3..].iter().any(|&v| v > DECAY_SLACK * head.max(f64::MIN_POSITIVE)) {
                return Err(Error::Domain(format!(
                    "decay hypothesis violated: |k(t)|(1+t)^(1+ρ) grows, samples {weighted:?}"
                )));
            }
            let q = abel_forward(k.clone(), rho, 1e-3 * spec.tol);
            let q2 = q.clone();
            let g: RealFn = Arc::new(move |u: f64| q2(w_of_u(u)));
            let rate = 0.5 + rho;
            let m = exp_constant(&g, rate, &grid(0.0, 6.0, 0.5))?;
            let cutoff = exponential_cutoff(&g, rate, m, 0.1 * spec.tol, |x| (-rate * x).exp() / rate, "g")?;
            let g_rule = Arc::new(SampledRule::build(&g, cutoff)?);
            let h: RealFn = Arc::new(move |xi: f64| Ok(2.0 * g_rule.sum(|u| (xi * u).cos())));
            let decay = SpectralDecay::Exponential(strip);
            let h_rule = Arc::new(spectral_rule(&h, decay, 0.1 * spec.tol)?);
            let r = h_rule;
            let dq: RealFn = Arc::new(move |w: f64| {
                if !(w >= 0.0) {
                    return Err(Error::Domain(format!("Q' needs w ≥ 0, got {w}")));
                }
                let u = u_of_w(w);
                Ok(-r.sum(|xi| xi * xi * sinc(xi * u)) * u_over_sinh(u) / (2.0 * PI))
            });
            Ok(SelbergTriple { h, g, q, dq, k, decay, rho })
        }
        ChainInput::H { h, decay, rho } => {
            check_rho(rho)?;
            let rule = Arc::new(spectral_rule(&h, decay, 0.1 * spec.tol)?);
            let (g, q, dq, k) = inverse_from_rule(rule, rho, 0.1 * spec.tol);
            Ok(SelbergTriple { h, g, q, dq, k, decay, rho })
        }
    }
}

/// Sup-norm comparison of k with the chain applied twice.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoundTrip {
    pub points: Vec<RoundTripPoint>,
    pub sup_residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RoundTripPoint {
    pub t: f64,
    pub k: Complex64,
    pub k_round_trip: Complex64,
}

/// k → Q → g → h → g → Q → k at the given points.
pub fn transform_roundtrip(k: RealFn, rho: f64, strip: f64, ts: &[f64], spec: ChainSpec) -> Result<RoundTrip> {
    let forward = transform_chain(ChainInput::K { k: k.clone(), rho, strip }, spec)?;
    let back = transform_chain(
        ChainInput::H {
            h: forward.h.clone(),
            decay: forward.decay,
            rho,
        },
        spec,
    )?;
    let mut points = Vec::with_capacity(ts.len());
    let mut sup: f64 = 0.0;
    for &t in ts {
        let want = k(t)?;
        let got = back.k(t)?;
        sup = sup.max((want - got).norm());
        points.push(RoundTripPoint { t, k: want, k_round_trip: got });
    }
    Ok(RoundTrip { points, sup_residual: sup })
}

fn check_spectral_parameter(s: Complex64) -> Result<()> {
    if !(s.re > 0.5) || !s.im.is_finite() {
        return Err(Error::Domain(format!("the resolvent triple needs Re s > 1/2, got {s}")));
    }
    let distance = s.re - 0.5;
    if distance < crate::scattering::POLE_GUARD {
        return Err(Error::PoleProximity {
            what: "resolvent triple",
            at: "s = 1/2".into(),
            distance,
        });
    }
    Ok(())
}

/// h_s(ξ) = 1/(ξ² + (s - 1/2)²).
pub fn resolvent_h(s: Complex64, xi: f64) -> Complex64 {
    let a = s - 0.5;
    1.0 / (xi * xi + a * a)
}

/// g_s(u) = e^{-(s-1/2)|u|}/(2s - 1).
pub fn resolvent_g(s: Complex64, u: f64) -> Complex64 {
    (-(s - 0.5) * u.abs()).exp() / (2.0 * s - 1.0)
}

/// |g_s - g_{s0}|(u) ≤ constant · e^{-rate u}.
pub fn resolvent_g_bound(s: Complex64, s0: Complex64) -> ExpBound {
    ExpBound {
        constant: 1.0 / (2.0 * s - 1.0).norm() + 1.0 / (2.0 * s0 - 1.0).norm(),
        rate: s.re.min(s0.re) - 0.5,
    }
}

/// The difference triple (h_s - h_{s0}, g_s - g_{s0}, k_s - k_{s0}).
pub fn resolvent_triple(s: Complex64, s0: Complex64) -> Result<SelbergTriple> {
    check_spectral_parameter(s)?;
    check_spectral_parameter(s0)?;
    let ks = ResolventKernel::new(s, 1e-13)?;
    let k0 = ResolventKernel::new(s0, 1e-13)?;
    let h: RealFn = Arc::new(move |xi: f64| Ok(resolvent_h(s, xi) - resolvent_h(s0, xi)));
    let g: RealFn = Arc::new(move |u: f64| Ok(resolvent_g(s, u) - resolvent_g(s0, u)));
    let q: RealFn = Arc::new(move |w: f64| {
        if !(w >= 0.0) {
            return Err(Error::Domain(format!("Q needs w ≥ 0, got {w}")));
        }
        let u = u_of_w(w);
        Ok(resolvent_g(s, u) - resolvent_g(s0, u))
    });
    // Q'(w) = g'(u)/(2 sinh u) = -(e^{-(s-1/2)u} - e^{-(s0-1/2)u})/(4 sinh u).
    let dq: RealFn = Arc::new(move |w: f64| {
        if !(w > 0.0) {
            return Err(Error::Domain(format!("Q' of the resolvent triple needs w > 0, got {w}")));
        }
        let u = u_of_w(w);
        let diff = (-(s - 0.5) * u).exp() - (-(s0 - 0.5) * u).exp();
        Ok(-diff / (4.0 * u.sinh()))
    });
    let k: RealFn = Arc::new(move |t: f64| {
        if t == 0.0 {
            return kernel_difference_at_zero(s, s0);
        }
        Ok(ks.eval_auto(t)? - k0.eval_auto(t)?)
    });
    Ok(SelbergTriple {
        h,
        g,
        q,
        dq,
        k,
        decay: SpectralDecay::Algebraic(4.0),
        rho: s.re.min(s0.re) - 1.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn coordinates() {
        for u in [0.0, 1e-6, 0.3, 2.0, 12.0] {
            assert!((u_of_w(w_of_u(u)) - u).abs() < 1e-12 * (1.0 + u));
        }
        assert!((w_of_u(1.0) - (1f64.exp() + (-1f64).exp() - 2.0)).abs() < 1e-15);
    }

    #[test]
    fn resolvent_closed_forms() {
        let s = c(2.0, 0.0);
        assert!((resolvent_g(s, 0.0) - 1.0 / 3.0).norm() < 1e-16);
        assert_eq!(resolvent_h(s, 0.7), resolvent_h(s, -0.7));
        assert_eq!(resolvent_g(s, 1.3), resolvent_g(s, -1.3));
        assert!(resolvent_triple(c(0.5, 0.0), s).is_err());
    }

    #[test]
    fn rho_must_be_positive() {
        let k: RealFn = Arc::new(|t: f64| Ok(c((1.0 + t).powi(-2), 0.0)));
        let input = ChainInput::K { k, rho: 0.0, strip: 1.0 };
        assert!(transform_chain(input, ChainSpec::default()).is_err());
    }
}
