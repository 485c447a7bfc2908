use num_complex::Complex64;

use crate::error::{Error, Result};

/// Gauss-Kronrod 7/15 nodes on [0, 1] half of the symmetric rule.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
/// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Decay hypothesis used to certify the truncation of a semi-infinite tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailDecay {
    /// |f(x)| <= C |x|^{-p}, p > 1.
    Algebraic(f64),
    /// |f(x)| <= C e^{-c |x|}, c > 0.
    Exponential(f64),
}

/// How integrals over [A, inf) are truncated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutoffPolicy {
    pub decay: TailDecay,
    /// Largest log-extent e^V of the truncated tail before giving up.
    pub max_log_extent: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub relative_tolerance: f64,
    pub absolute_tolerance: f64,
    pub max_subdivisions: usize,
    pub cutoff: CutoffPolicy,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            relative_tolerance: 1e-12,
            absolute_tolerance: 1e-14,
            max_subdivisions: 2000,
            cutoff: CutoffPolicy {
                decay: TailDecay::Algebraic(2.0),
                max_log_extent: 60.0,
            },
        }
    }
}

impl QuadratureSpec {
    pub fn with_tolerances(relative: f64, absolute: f64) -> Self {
        QuadratureSpec {
            relative_tolerance: relative,
            absolute_tolerance: absolute,
            ..Default::default()
        }
    }

    pub fn with_decay(mut self, decay: TailDecay) -> Self {
        self.cutoff.decay = decay;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.relative_tolerance > 0.0 && self.absolute_tolerance > 0.0) {
            return Err(Error::Input("quadrature tolerances must be positive".into()));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::Input("max_subdivisions must be at least 1".into()));
        }
        match self.cutoff.decay {
            TailDecay::Algebraic(p) if p <= 1.0 => {
                Err(Error::Input(format!("algebraic tail decay needs p > 1, got {p}")))
            }
            TailDecay::Exponential(c) if c <= 0.0 => {
                Err(Error::Input(format!("exponential tail decay needs c > 0, got {c}")))
            }
            _ => Ok(()),
        }
    }
}

/// Integration domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    Finite(f64, f64),
    /// [a, inf)
    UpperTail(f64),
    /// (-inf, b]
    LowerTail(f64),
    /// (-inf, inf)
    Line,
}

/// Declared algebraic singularities |f| ~ |x - x0|^{-alpha}, alpha < 1, at the
/// finite endpoints.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Endpoints {
    pub lower: Option<f64>,
    pub upper: Option<f64>,
}

impl Endpoints {
    pub const REGULAR: Endpoints = Endpoints { lower: None, upper: None };

    pub fn lower(alpha: f64) -> Self {
        Endpoints { lower: Some(alpha), upper: None }
    }

    pub fn upper(alpha: f64) -> Self {
        Endpoints { lower: None, upper: Some(alpha) }
    }

    pub fn both(lower: f64, upper: f64) -> Self {
        Endpoints { lower: Some(lower), upper: Some(upper) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: Complex64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

fn kronrod<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut abs_sum = fc.norm() * WGK[7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        kron += (f1 + f2) * WGK[j];
        abs_sum += (f1.norm() + f2.norm()) * WGK[j];
        if j % 2 == 1 {
            gauss += (f1 + f2) * WG[j / 2];
        }
    }
    let value = kron * half;
    let raw = ((kron - gauss) * half).norm();
    let floor = 50.0 * f64::EPSILON * abs_sum * half.abs();
    Panel {
        a,
        b,
        value,
        error: raw.max(floor),
    }
}

/// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on P_n.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                (p0, p1) = (p1, ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf);
            }
            dp = nf * (x * p1 - p0) / (x * x - 1.0);
            let step = p1 / dp;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// One 15-point Kronrod panel on [a, b]: (value, Kronrod-Gauss error estimate).
pub fn kronrod_15<F: Fn(f64) -> Complex64>(f: F, a: f64, b: f64) -> (Complex64, f64) {
    let p = kronrod(&f, a, b);
    (p.value, p.error)
}

/// Globally adaptive Gauss-Kronrod on a finite interval of a smooth integrand.
/// Returns the best value even when the target is missed, with a flag.
fn adapt<F: Fn(f64) -> Complex64>(
    f: &F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
    abs_target: f64,
) -> (Integral, bool) {
    let mut panels = vec![kronrod(f, a, b)];
    let mut evaluations = 15;
    loop {
        let value: Complex64 = panels.iter().map(|p| p.value).sum();
        let error: f64 = panels.iter().map(|p| p.error).sum();
        let target = abs_target.max(spec.relative_tolerance * value.norm());
        let result = Integral {
            value,
            error_estimate: error,
            evaluations,
        };
        if error <= target {
            return (result, true);
        }
        if panels.len() >= spec.max_subdivisions {
            return (result, false);
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .fold((0, -1.0), |acc, (i, p)| if p.error > acc.1 { (i, p.error) } else { acc });
        let p = panels.swap_remove(worst);
        let mid = 0.5 * (p.a + p.b);
        if !(mid > p.a.min(p.b) && mid < p.a.max(p.b)) {
            return (result, false);
        }
        panels.push(kronrod(f, p.a, mid));
        panels.push(kronrod(f, mid, p.b));
        evaluations += 30;
    }
}

fn finish(parts: &[(Integral, bool)], spec: &QuadratureSpec, extra_error: f64) -> Result<Integral> {
    let value: Complex64 = parts.iter().map(|p| p.0.value).sum();
    let error: f64 = parts.iter().map(|p| p.0.error_estimate).sum::<f64>() + extra_error;
    let evaluations = parts.iter().map(|p| p.0.evaluations).sum();
    let target = spec.absolute_tolerance.max(spec.relative_tolerance * value.norm());
    if parts.iter().all(|p| p.1) && error <= target * 1.000_001 {
        Ok(Integral {
            value,
            error_estimate: error,
            evaluations,
        })
    } else {
        Err(Error::ToleranceNotMet {
            estimate: error,
            target,
        })
    }
}

fn singular_map_exponent(alpha: f64) -> Result<f64> {
    if !(alpha < 1.0) || !alpha.is_finite() {
        return Err(Error::Input(format!("endpoint singularity exponent must be < 1, got {alpha}")));
    }
    Ok(if alpha <= 0.0 { 1.0 } else { 1.0 / (1.0 - alpha) })
}

/// Integral over [a, b] with at most one singular endpoint, at `a` if `at_lower`.
fn finite_one_sided<F: Fn(f64) -> Complex64>(
    f: &F,
    a: f64,
    b: f64,
    alpha: Option<f64>,
    at_lower: bool,
    spec: &QuadratureSpec,
    abs_target: f64,
) -> Result<(Integral, bool)> {
    match alpha {
        None => Ok(adapt(f, a, b, spec, abs_target)),
        Some(alpha) => {
            let m = singular_map_exponent(alpha)?;
            let len = b - a;
            if at_lower {
                let g = |u: f64| {
                    let x = a + len * u.powf(m);
                    f(x) * (len * m * u.powf(m - 1.0))
                };
                Ok(adapt(&g, 0.0, 1.0, spec, abs_target))
            } else {
                let g = |u: f64| {
                    let x = b - len * u.powf(m);
                    f(x) * (len * m * u.powf(m - 1.0))
                };
                Ok(adapt(&g, 0.0, 1.0, spec, abs_target))
            }
        }
    }
}

fn finite<F: Fn(f64) -> Complex64>(
    f: &F,
    a: f64,
    b: f64,
    ends: Endpoints,
    spec: &QuadratureSpec,
    abs_target: f64,
) -> Result<Vec<(Integral, bool)>> {
    match (ends.lower, ends.upper) {
        (Some(_), Some(_)) => {
            let mid = 0.5 * (a + b);
            Ok(vec![
                finite_one_sided(f, a, mid, ends.lower, true, spec, 0.5 * abs_target)?,
                finite_one_sided(f, mid, b, ends.upper, false, spec, 0.5 * abs_target)?,
            ])
        }
        (Some(_), None) => Ok(vec![finite_one_sided(f, a, b, ends.lower, true, spec, abs_target)?]),
        (None, Some(_)) => Ok(vec![finite_one_sided(f, a, b, ends.upper, false, spec, abs_target)?]),
        (None, None) => Ok(vec![adapt(f, a, b, spec, abs_target)]),
    }
}

/// A posteriori bound for the tail integral over [a + e^v, inf), estimated from
/// samples at x and 2x under the declared decay hypothesis.
fn tail_bound<F: Fn(f64) -> Complex64>(f: &F, a: f64, v: f64, decay: TailDecay) -> f64 {
    let d = v.exp();
    match decay {
        TailDecay::Algebraic(p) => {
            let c1 = f(a + d).norm() * d.powf(p);
            let c2 = f(a + 2.0 * d).norm() * (2.0 * d).powf(p);
            c1.max(c2) * d.powf(1.0 - p) / (p - 1.0)
        }
        TailDecay::Exponential(c) => {
            let c1 = f(a + d).norm();
            let c2 = f(a + 2.0 * d).norm() * (c * d).exp();
            c1.max(c2) / c
        }
    }
}

/// Integral over [a, inf): [a, a+1] directly, then x = a + e^v on [0, V] with V
/// grown until the certified tail is below a quarter of the target.
fn upper_tail<F: Fn(f64) -> Complex64>(
    f: &F,
    a: f64,
    lower_alpha: Option<f64>,
    spec: &QuadratureSpec,
) -> Result<(Vec<(Integral, bool)>, f64)> {
    let head = finite(
        f,
        a,
        a + 1.0,
        Endpoints {
            lower: lower_alpha,
            upper: None,
        },
        spec,
        0.25 * spec.absolute_tolerance,
    )?;
    let head_value: Complex64 = head.iter().map(|p| p.0.value).sum();
    let mut v = 1.0;
    let mut bound;
    loop {
        bound = tail_bound(f, a, v, spec.cutoff.decay);
        let target = 0.25 * spec.absolute_tolerance.max(spec.relative_tolerance * head_value.norm());
        if bound.is_finite() && bound <= target {
            break;
        }
        v += 1.0;
        if v > spec.cutoff.max_log_extent {
            return Err(Error::TailNotCertifiable(format!(
                "tail bound {bound:e} above target {target:e} at x = {:e}",
                a + v.exp()
            )));
        }
    }
    let g = |w: f64| {
        let e = w.exp();
        f(a + e) * e
    };
    let mut parts = head;
    parts.push(adapt(&g, 0.0, v, spec, 0.5 * spec.absolute_tolerance));
    Ok((parts, bound))
}

/// Adaptive integration of a complex-valued integrand over a real domain.
pub fn integrate<F: Fn(f64) -> Complex64>(
    f: F,
    domain: Domain,
    ends: Endpoints,
    spec: &QuadratureSpec,
) -> Result<Integral> {
    spec.validate()?;
    let inner = &QuadratureSpec {
        relative_tolerance: 0.5 * spec.relative_tolerance,
        absolute_tolerance: 0.5 * spec.absolute_tolerance,
        ..*spec
    };
    match domain {
        Domain::Finite(a, b) => {
            if !(a.is_finite() && b.is_finite() && a < b) {
                return Err(Error::InvalidInterval { lower: a, upper: b });
            }
            let parts = finite(&f, a, b, ends, inner, inner.absolute_tolerance)?;
            finish(&parts, spec, 0.0)
        }
        Domain::UpperTail(a) => {
            if !a.is_finite() {
                return Err(Error::InvalidInterval {
                    lower: a,
                    upper: f64::INFINITY,
                });
            }
            let (parts, tail) = upper_tail(&f, a, ends.lower, inner)?;
            finish(&parts, spec, tail)
        }
        Domain::LowerTail(b) => {
            if !b.is_finite() {
                return Err(Error::InvalidInterval {
                    lower: f64::NEG_INFINITY,
                    upper: b,
                });
            }
            let g = |x: f64| f(-x);
            let (parts, tail) = upper_tail(&g, -b, ends.upper, inner)?;
            finish(&parts, spec, tail)
        }
        Domain::Line => {
            let g = |x: f64| f(-x);
            let (mut parts, t1) = upper_tail(&f, 0.0, None, inner)?;
            let (more, t2) = upper_tail(&g, 0.0, None, inner)?;
            parts.extend(more);
            finish(&parts, spec, t1 + t2)
        }
    }
}

/// Real-valued convenience wrapper; returns (value, error estimate).
pub fn integrate_real<F: Fn(f64) -> f64>(
    f: F,
    domain: Domain,
    ends: Endpoints,
    spec: &QuadratureSpec,
) -> Result<(f64, f64)> {
    let r = integrate(|x| Complex64::new(f(x), 0.0), domain, ends, spec)?;
    Ok((r.value.re, r.error_estimate))
}
