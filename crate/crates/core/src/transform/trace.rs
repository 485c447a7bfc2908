//! The identity term, the geometric side and the trace formula on an
//! elementary cylinder.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::{fibre_sum, remainder_integral, CertifiedSum, ResolventKernel};
use crate::special::{integrate, Domain, Endpoints, QuadratureSpec, TailDecay};
use crate::surface::LengthSpectrum;

use super::chain::{resolvent_g, resolvent_g_bound, resolvent_h, ExpBound};

const MAX_N_TERMS: usize = 1_000_000;

fn check_half_plane(s: Complex64, what: &'static str) -> Result<()> {
    if !(s.re > 0.5) || !s.im.is_finite() {
        return Err(Error::Domain(format!("{what} needs Re s > 1/2, got {s}")));
    }
    let distance = s.re - 0.5;
    if distance < crate::scattering::POLE_GUARD {
        return Err(Error::PoleProximity {
            what,
            at: "s = 1/2".into(),
            distance,
        });
    }
    Ok(())
}

/// (1/4π) ∫ ξ (h_s(ξ) - h_{s0}(ξ)) tanh(πξ) dξ, which equals k_s(0) - k_{s0}(0).
pub fn identity_term(s: Complex64, s0: Complex64) -> Result<Complex64> {
    check_half_plane(s, "identity term")?;
    check_half_plane(s0, "identity term")?;
    if s == s0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let f = |xi: f64| xi * (resolvent_h(s, xi) - resolvent_h(s0, xi)) * (PI * xi).tanh();
    let spec = QuadratureSpec::with_tolerances(1e-13, 1e-13).with_decay(TailDecay::Algebraic(3.0));
    let r = integrate(f, Domain::UpperTail(0.0), Endpoints::REGULAR, &spec)?;
    Ok(r.value / (2.0 * PI))
}

/// Closed geodesics entering the geometric side.
#[derive(Debug, Clone, Copy)]
pub enum Lengths<'a> {
    /// One unoriented primitive geodesic.
    Single(f64),
    /// The primitive entries of a length spectrum, with multiplicity.
    Spectrum(&'a LengthSpectrum),
}

/// Σ_c Σ_{n≥1} ℓ(c) g(nℓ(c))/(2 sinh(nℓ(c)/2)) over oriented primitive c, so
/// each unoriented entry counts twice. `bound` certifies the n-tails.
pub fn geometric_side(
    lengths: Lengths<'_>,
    g: &dyn Fn(f64) -> Result<Complex64>,
    bound: ExpBound,
    tol: f64,
) -> Result<CertifiedSum> {
    if !(tol > 0.0) {
        return Err(Error::Input(format!("tolerance must be positive, got {tol}")));
    }
    let decay = bound.rate + 0.5;
    if !(decay > 0.0) || !(bound.constant >= 0.0) || !bound.constant.is_finite() {
        return Err(Error::Domain(format!(
            "geometric side needs |g(u)| ≤ C e^{{-cu}} with c > -1/2, got C = {}, c = {}",
            bound.constant, bound.rate
        )));
    }
    let classes: Vec<(f64, f64)> = match lengths {
        Lengths::Single(ell) => vec![(ell, 1.0)],
        Lengths::Spectrum(spec) => spec
            .entries
            .iter()
            .filter(|e| e.primitive)
            .map(|e| (e.length, e.multiplicity as f64))
            .collect(),
    };
    let mut value = Complex64::new(0.0, 0.0);
    let mut tail_bound = 0.0;
    let mut terms = 0;
    let per_class = tol / classes.len().max(1) as f64;
    for (ell, mult) in classes {
        if !(ell > 0.0) || !ell.is_finite() {
            return Err(Error::Domain(format!("geodesic length must be positive, got {ell}")));
        }
        let weight = 2.0 * mult * ell;
        // Σ_{n>N} weight C e^{-cnℓ}/(2 sinh(nℓ/2)) ≤ weight C e^{-(c+1/2)(N+1)ℓ}/((1-e^{-(N+1)ℓ})(1-e^{-(c+1/2)ℓ})).
        let tail = |n: usize| {
            let m = (n + 1) as f64 * ell;
            weight * bound.constant * (-decay * m).exp() / ((-(-m).exp_m1()) * (-(-decay * ell).exp_m1()))
        };
        let mut sum = Complex64::new(0.0, 0.0);
        let mut n = 0;
        loop {
            let b = tail(n);
            if b <= per_class {
                tail_bound += b;
                break;
            }
            n += 1;
            let u = n as f64 * ell;
            sum += g(u)? / (2.0 * (0.5 * u).sinh());
            if n > MAX_N_TERMS {
                return Err(Error::TailNotCertifiable(format!("geometric side at ℓ = {ell}")));
            }
        }
        value += weight * sum;
        terms += n;
    }
    Ok(CertifiedSum {
        value,
        tail_bound,
        terms,
    })
}

/// Parameters of the trace formula with K⁰ = K_s - K_{s0}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceConfig {
    pub s: Complex64,
    pub s0: Complex64,
    /// Split point A between direct quadrature on [0, A] and the remainder integral.
    pub a: f64,
    /// Sign carried by the component; +1 for a single elementary cylinder.
    pub sign: f64,
    pub tol: f64,
}

impl TraceConfig {
    pub fn new(s: Complex64, s0: Complex64, a: f64) -> Result<Self> {
        let cfg = TraceConfig {
            s,
            s0,
            a,
            sign: 1.0,
            tol: 1e-11,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("s", self.s), ("s0", self.s0)] {
            if !(v.re > 1.0) || !v.im.is_finite() {
                return Err(Error::Domain(format!("trace check needs Re {name} > 1, got {v}")));
            }
        }
        if !(self.a > 0.0) || !self.a.is_finite() {
            return Err(Error::Input(format!("A must be positive, got {}", self.a)));
        }
        if self.sign.abs() != 1.0 {
            return Err(Error::Input(format!("component sign must be ±1, got {}", self.sign)));
        }
        if !(self.tol > 0.0) {
            return Err(Error::Input(format!("tolerance must be positive, got {}", self.tol)));
        }
        Ok(())
    }
}

/// Both sides of the trace formula on the elementary cylinder of length ℓ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceCheck {
    pub ell: f64,
    pub config: TraceConfig,
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub residual: f64,
    /// ∫₀^A of the fibre sums, for s and s0.
    pub near: [Complex64; 2],
    /// ∫_A^∞ of the fibre sums, for s and s0.
    pub remainder: [Complex64; 2],
    /// Quadrature error and omitted fibre-sum tails on [0, A].
    pub near_error_bound: f64,
    /// Error bounds of the two remainder integrals.
    pub remainder_error_bound: f64,
    pub geometric_tail_bound: f64,
}

/// ∫₀^A Σ_{n≠0} k_s(σ_ℓ(0,a,n,a)) da; returns (value, error bound).
fn near_integral(ell: f64, s: Complex64, a: f64, tol: f64) -> Result<(Complex64, f64)> {
    let kernel = ResolventKernel::new(s, (1e-3 * tol).clamp(1e-13, 1e-8))?;
    let tail_tol = 0.25 * tol / a;
    let failure = std::cell::RefCell::new(None);
    let f = |x: f64| match fibre_sum(&kernel, ell, x, tail_tol) {
        Ok((v, _)) => v,
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            Complex64::new(0.0, 0.0)
        }
    };
    let spec = QuadratureSpec::with_tolerances(1e-13, 0.5 * tol);
    let r = integrate(f, Domain::Finite(0.0, a), Endpoints::REGULAR, &spec)?;
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok((r.value, r.error_estimate + 0.25 * tol))
}

/// lhs = ∫_ℝ Σ_{n≠0} (k_s - k_{s0})(σ_ℓ(0,a,n,a)) da over one fibre,
/// rhs = geometric_side(ℓ, g_s - g_{s0}).
pub fn cylinder_trace_check(ell: f64, config: &TraceConfig) -> Result<TraceCheck> {
    config.validate()?;
    if !(ell > 0.0) || !ell.is_finite() {
        return Err(Error::Domain(format!("ℓ must be positive, got {ell}")));
    }
    let tol = config.tol;
    let mut near = [Complex64::new(0.0, 0.0); 2];
    let mut remainder = [Complex64::new(0.0, 0.0); 2];
    let mut near_error_bound = 0.0;
    let mut remainder_error_bound = 0.0;
    for (i, s) in [config.s, config.s0].into_iter().enumerate() {
        let (v, e) = near_integral(ell, s, config.a, tol)?;
        near[i] = v;
        near_error_bound += e;
        let r = remainder_integral(ell, s, config.a, tol)?;
        remainder[i] = r.value;
        remainder_error_bound += r.error_bound();
    }
    let lhs = 2.0 * config.sign * (near[0] + remainder[0] - near[1] - remainder[1]);
    let (s, s0) = (config.s, config.s0);
    let g = |u: f64| Ok(resolvent_g(s, u) - resolvent_g(s0, u));
    let geo = geometric_side(Lengths::Single(ell), &g, resolvent_g_bound(s, s0), tol)?;
    let rhs = config.sign * geo.value;
    Ok(TraceCheck {
        ell,
        config: *config,
        lhs,
        rhs,
        residual: (lhs - rhs).norm(),
        near,
        remainder,
        near_error_bound: 2.0 * near_error_bound,
        remainder_error_bound: 2.0 * remainder_error_bound,
        geometric_tail_bound: geo.tail_bound,
    })
}
