//! Approximate Eisenstein functions of the standalone cylinder X_ℓ in the
//! constant Fourier mode, and the scattering pair read off from them.
//!
//! Writing L u = (p u′)′ + s(1-s) u with p = ℓ² + a², the function
//! E = χ h - w solves L E = 0 off a = 0, where χ h is the cut-off mode on one
//! half and w is the decaying solution of L w = L(χ h).

use std::cell::RefCell;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hyperbolic::collar_half_width;
use crate::special::{integrate, kronrod_15, Domain, Endpoints, QuadratureSpec, TailDecay};

use super::matrices::{max_norm, CMatrix, Ends, ScatteringPair};
use super::modes::{check_mode_parameter, continued_mode, mode_with_derivative, wronskian};

/// Local coordinates at which (C, D) are read off; the first is reported,
/// the others measure constancy.
pub const EXTRACTION_POINTS: [f64; 3] = [-1.0, -1.5, -0.5];

/// Smooth step χ(a): 0 for a ≤ -2ε, 1 for a ≥ -ε, quintic in between.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cutoff {
    pub eps: f64,
}

impl Cutoff {
    pub fn new(eps: f64) -> Result<Self> {
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(Error::Domain(format!("cut-off width must be positive, got {eps}")));
        }
        Ok(Cutoff { eps })
    }

    /// ε = 0.3 times the collar half-width.
    pub fn default_for(ell: f64) -> Self {
        Cutoff {
            eps: 0.3 * collar_half_width(ell),
        }
    }

    /// (χ, χ′, χ″) at a.
    pub fn eval(&self, a: f64) -> (f64, f64, f64) {
        let e = self.eps;
        if a <= -2.0 * e {
            return (0.0, 0.0, 0.0);
        }
        if a >= -e {
            return (1.0, 0.0, 0.0);
        }
        let t = (a + 2.0 * e) / e;
        let u = 1.0 - t;
        (
            t * t * t * (10.0 - 15.0 * t + 6.0 * t * t),
            30.0 * t * t * u * u / e,
            60.0 * t * u * (1.0 - 2.0 * t) / (e * e),
        )
    }
}

/// Samples of the constant Fourier mode F⁰ and its a-derivative.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstantModeProfile {
    pub grid: Vec<f64>,
    pub f0: Vec<Complex64>,
    pub df0: Vec<Complex64>,
}

impl ConstantModeProfile {
    pub fn new(grid: Vec<f64>, f0: Vec<Complex64>, df0: Vec<Complex64>) -> Result<Self> {
        if grid.is_empty() || grid.len() != f0.len() || grid.len() != df0.len() {
            return Err(Error::Input("profile arrays must be non-empty and of equal length".into()));
        }
        if grid.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::Input("profile grid must be strictly increasing".into()));
        }
        if grid.iter().any(|&a| !(a < 0.0)) {
            return Err(Error::Input("profile grid must lie in a < 0".into()));
        }
        if f0.iter().chain(df0.iter()).any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::Input("profile values must be finite".into()));
        }
        Ok(ConstantModeProfile { grid, f0, df0 })
    }

    /// Samples D h(ℓ,s) + C h(ℓ,1-s) on the grid.
    pub fn synthesize(ell: f64, s: Complex64, d: Complex64, c: Complex64, grid: Vec<f64>) -> Result<Self> {
        let mut f0 = Vec::with_capacity(grid.len());
        let mut df0 = Vec::with_capacity(grid.len());
        for &a in &grid {
            let (u1, d1) = mode_with_derivative(ell, s, 0, a)?;
            let (u2, d2) = mode_with_derivative(ell, 1.0 - s, 0, a)?;
            f0.push(d * u1 + c * u2);
            df0.push(d * d1 + c * d2);
        }
        ConstantModeProfile::new(grid, f0, df0)
    }

    /// (F⁰, ∂F⁰) at a: exact at grid points, cubic Hermite in between.
    pub fn at(&self, a: f64) -> Result<(Complex64, Complex64)> {
        let g = &self.grid;
        let (lo, hi) = (g[0], g[g.len() - 1]);
        if !(a >= lo && a <= hi) {
            return Err(Error::Domain(format!("a = {a} outside the profile grid [{lo}, {hi}]")));
        }
        let k = g.partition_point(|&x| x < a);
        if k < g.len() && (g[k] - a).abs() <= 1e-12 * a.abs().max(1.0) {
            return Ok((self.f0[k], self.df0[k]));
        }
        let (i, j) = (k - 1, k);
        let h = g[j] - g[i];
        let t = (a - g[i]) / h;
        let (t2, t3) = (t * t, t * t * t);
        let (h00, h10, h01, h11) = (2.0 * t3 - 3.0 * t2 + 1.0, t3 - 2.0 * t2 + t, -2.0 * t3 + 3.0 * t2, t3 - t2);
        let f = self.f0[i] * h00 + self.df0[i] * (h10 * h) + self.f0[j] * h01 + self.df0[j] * (h11 * h);
        let (d00, d10, d01, d11) = (6.0 * t2 - 6.0 * t, 3.0 * t2 - 4.0 * t + 1.0, -6.0 * t2 + 6.0 * t, 3.0 * t2 - 2.0 * t);
        let df = (self.f0[i] * d00 + self.f0[j] * d01) / h + self.df0[i] * d10 + self.df0[j] * d11;
        Ok((f, df))
    }
}

/// C alone from (F⁰, ∂F⁰) at a: (ℓ²+a²)/(1-2s) (h(s) ∂F⁰ - ∂h(s) F⁰).
/// Needs only h(ℓ,s), so it stays defined where h(ℓ,1-s) has a pole.
pub fn extract_c_at(ell: f64, s: Complex64, a: f64, f: Complex64, df: Complex64) -> Result<Complex64> {
    check_not_half(s)?;
    let (u, du) = mode_with_derivative(ell, s, 0, a)?;
    Ok((ell * ell + a * a) / (1.0 - 2.0 * s) * (u * df - du * f))
}

/// (D, C) from (F⁰, ∂F⁰) at a by inversion of the Wronskian matrix.
pub fn extract_cd_at(ell: f64, s: Complex64, a: f64, f: Complex64, df: Complex64) -> Result<(Complex64, Complex64)> {
    check_not_half(s)?;
    let (v, dv) = mode_with_derivative(ell, 1.0 - s, 0, a)?;
    let d = (ell * ell + a * a) / (1.0 - 2.0 * s) * (dv * f - v * df);
    Ok((d, extract_c_at(ell, s, a, f, df)?))
}

/// (D, C) of a constant-mode profile at a_eval.
pub fn extract_cd(profile: &ConstantModeProfile, ell: f64, s: Complex64, a_eval: f64) -> Result<(Complex64, Complex64)> {
    let (f, df) = profile.at(a_eval)?;
    extract_cd_at(ell, s, a_eval, f, df)
}

fn check_not_half(s: Complex64) -> Result<()> {
    let d = (s - 0.5).norm();
    if d < super::modes::POLE_GUARD {
        return Err(Error::PoleProximity {
            what: "Wronskian inversion 1/(1-2s)",
            at: "0.5".into(),
            distance: d,
        });
    }
    Ok(())
}

/// Number of Kronrod panels tabulating the Green's-function integrals.
const SUPPORT_PANELS: usize = 16;

/// E_i(s) for one end of the cylinder, in the global coordinate a.
/// `orientation` is +1 for the end {a < 0} and -1 for the end {a > 0}.
#[derive(Debug, Clone)]
pub struct CylinderEisenstein {
    pub ell: f64,
    pub s: Complex64,
    pub cutoff: Cutoff,
    pub orientation: f64,
    weight: Complex64,
    nodes: Vec<f64>,
    cum_minus: Vec<Complex64>,
    cum_plus: Vec<Complex64>,
    /// Summed Kronrod error estimates of the tabulated integrals.
    pub quadrature_error: f64,
}

impl CylinderEisenstein {
    pub fn new(ell: f64, s: Complex64, cutoff: Cutoff, orientation: f64) -> Result<Self> {
        if !(ell > 0.0 && ell.is_finite()) {
            return Err(Error::Domain(format!("the cylinder needs ℓ > 0, got {ell}")));
        }
        if !(s.re > 0.5) {
            return Err(Error::Domain(format!("Eisenstein functions are built for Re s > 1/2, got {s}")));
        }
        if orientation != 1.0 && orientation != -1.0 {
            return Err(Error::Input("orientation must be ±1".into()));
        }
        check_mode_parameter(s)?;
        let e = cutoff.eps;
        let (lo, hi) = if orientation > 0.0 { (-2.0 * e, -e) } else { (e, 2.0 * e) };
        // p (u₋u₊′ - u₋′u₊) at a = 0, where u₊(a) = u₋(-a).
        let (h0, dh0) = continued_mode(ell, s, 0.0)?;
        let weight = -2.0 * ell * ell * h0 * dh0;
        if weight.norm() == 0.0 {
            return Err(Error::Degenerate("vanishing Wronskian of the decaying solutions".into()));
        }
        let nodes: Vec<f64> = (0..=SUPPORT_PANELS)
            .map(|k| lo + (hi - lo) * k as f64 / SUPPORT_PANELS as f64)
            .collect();
        let mut out = CylinderEisenstein {
            ell,
            s,
            cutoff,
            orientation,
            weight,
            nodes,
            cum_minus: vec![Complex64::new(0.0, 0.0)],
            cum_plus: vec![Complex64::new(0.0, 0.0)],
            quadrature_error: 0.0,
        };
        for k in 0..SUPPORT_PANELS {
            let (x0, x1) = (out.nodes[k], out.nodes[k + 1]);
            let (vm, em) = out.panel(x0, x1, false)?;
            let (vp, ep) = out.panel(x0, x1, true)?;
            out.cum_minus.push(out.cum_minus[k] + vm);
            out.cum_plus.push(out.cum_plus[k] + vp);
            out.quadrature_error += em + ep;
        }
        Ok(out)
    }

    fn u_minus(&self, a: f64) -> Result<(Complex64, Complex64)> {
        continued_mode(self.ell, self.s, a)
    }

    fn u_plus(&self, a: f64) -> Result<(Complex64, Complex64)> {
        let (u, du) = continued_mode(self.ell, self.s, -a)?;
        Ok((u, -du))
    }

    /// χh restricted to the end, its derivative, and L(χh).
    fn cut_mode(&self, a: f64) -> Result<(Complex64, Complex64, Complex64)> {
        let o = self.orientation;
        let b = o * a;
        let (c, c1, c2) = self.cutoff.eval(b);
        if c == 0.0 || b >= 0.0 {
            return Ok(Default::default());
        }
        let (u, du) = mode_with_derivative(self.ell, self.s, 0, b)?;
        let du = o * du;
        let c1 = o * c1;
        let p = self.ell * self.ell + a * a;
        let f = p * c2 * u + 2.0 * p * c1 * du + 2.0 * a * c1 * u;
        Ok((c * u, c1 * u + c * du, f))
    }

    /// One Kronrod panel of u₋ L(χh) (or u₊ L(χh)) on [x0, x1].
    fn panel(&self, x0: f64, x1: f64, plus: bool) -> Result<(Complex64, f64)> {
        if !(x0 < x1) {
            return Ok((Complex64::new(0.0, 0.0), 0.0));
        }
        let failure = RefCell::new(None);
        let g = |a: f64| {
            let r = self.cut_mode(a).and_then(|(_, _, f)| {
                let (u, _) = if plus { self.u_plus(a)? } else { self.u_minus(a)? };
                Ok(u * f)
            });
            r.unwrap_or_else(|e| {
                failure.borrow_mut().get_or_insert(e);
                Complex64::new(0.0, 0.0)
            })
        };
        let r = kronrod_15(g, x0, x1);
        if let Some(e) = failure.into_inner() {
            return Err(e);
        }
        Ok(r)
    }

    /// (∫_lo^a u₋ L(χh), ∫_a^hi u₊ L(χh)) for a in the support.
    fn partials(&self, a: f64) -> Result<(Complex64, Complex64)> {
        let n = SUPPORT_PANELS;
        let k = self.nodes.partition_point(|&x| x <= a).saturating_sub(1).min(n - 1);
        let (hm, _) = self.panel(self.nodes[k], a, false)?;
        let (hp, _) = self.panel(self.nodes[k], a, true)?;
        Ok((self.cum_minus[k] + hm, self.cum_plus[n] - self.cum_plus[k] - hp))
    }

    /// (E, ∂E) at a ≠ 0.
    pub fn eval(&self, a: f64) -> Result<(Complex64, Complex64)> {
        if !a.is_finite() || a == 0.0 {
            return Err(Error::Domain(format!("E is evaluated at finite a ≠ 0, got {a}")));
        }
        let n = SUPPORT_PANELS;
        let (lo, hi) = (self.nodes[0], self.nodes[n]);
        let zero = Complex64::new(0.0, 0.0);
        let (im, ip) = if a <= lo {
            (zero, self.cum_plus[n])
        } else if a >= hi {
            (self.cum_minus[n], zero)
        } else {
            self.partials(a)?
        };
        let mut w = zero;
        let mut dw = zero;
        if a > lo {
            let (u, du) = self.u_plus(a)?;
            w += u * im;
            dw += du * im;
        }
        if a < hi {
            let (u, du) = self.u_minus(a)?;
            w += u * ip;
            dw += du * ip;
        }
        let (ch, dch, _) = self.cut_mode(a)?;
        Ok((ch - w / self.weight, dch - dw / self.weight))
    }

    /// Constant mode seen from end j (orientation oj) at local coordinate b < 0.
    pub fn seen_from(&self, oj: f64, b: f64) -> Result<(Complex64, Complex64)> {
        let (f, df) = self.eval(oj * b)?;
        Ok((f, oj * df))
    }

    /// Profile of this function on end j over a local grid.
    pub fn profile(&self, oj: f64, grid: Vec<f64>) -> Result<ConstantModeProfile> {
        let mut f0 = Vec::with_capacity(grid.len());
        let mut df0 = Vec::with_capacity(grid.len());
        for &b in &grid {
            let (f, df) = self.seen_from(oj, b)?;
            f0.push(f);
            df0.push(df);
        }
        ConstantModeProfile::new(grid, f0, df0)
    }

    /// Breakpoints of E inside the open interval (lo, hi).
    fn breakpoints(&self, lo: f64, hi: f64) -> Vec<f64> {
        let e = self.cutoff.eps;
        let mut v: Vec<f64> = [-2.0 * e, -e, e, 2.0 * e].into_iter().filter(|&x| lo < x && x < hi).collect();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v
    }
}

pub const ORIENTATIONS: [f64; 2] = [1.0, -1.0];

/// Output of [`cylinder_scattering`].
#[derive(Debug, Clone, PartialEq)]
pub struct CylinderScattering {
    pub pair: ScatteringPair,
    /// Largest change of (C, D) across [`EXTRACTION_POINTS`].
    pub constancy: f64,
}

/// The 2×2 scattering pair of the standalone cylinder, ends ordered (-, +).
pub fn cylinder_scattering(ell: f64, s: Complex64, cutoff: Cutoff) -> Result<CylinderScattering> {
    let funcs = ORIENTATIONS
        .iter()
        .map(|&o| CylinderEisenstein::new(ell, s, cutoff, o))
        .collect::<Result<Vec<_>>>()?;
    let mut c = CMatrix::zeros(2, 2);
    let mut d = CMatrix::zeros(2, 2);
    let mut constancy: f64 = 0.0;
    for (i, e) in funcs.iter().enumerate() {
        for (j, &oj) in ORIENTATIONS.iter().enumerate() {
            let mut first = None;
            for &b in &EXTRACTION_POINTS {
                let (f, df) = e.seen_from(oj, b)?;
                let (dv, cv) = extract_cd_at(ell, s, b, f, df)?;
                match first {
                    None => {
                        d[(i, j)] = dv;
                        c[(i, j)] = cv;
                        first = Some((dv, cv));
                    }
                    Some((d0, c0)) => constancy = constancy.max((dv - d0).norm()).max((cv - c0).norm()),
                }
            }
        }
    }
    Ok(CylinderScattering {
        pair: ScatteringPair::new(Ends::cylinder(), vec![ell, ell], s, c, d)?,
        constancy,
    })
}

/// C alone for the standalone cylinder; defined also where h(ℓ,1-s) has poles.
pub fn cylinder_c(ell: f64, s: Complex64, cutoff: Cutoff) -> Result<CMatrix> {
    let mut c = CMatrix::zeros(2, 2);
    for (i, &o) in ORIENTATIONS.iter().enumerate() {
        let e = CylinderEisenstein::new(ell, s, cutoff, o)?;
        for (j, &oj) in ORIENTATIONS.iter().enumerate() {
            let b = EXTRACTION_POINTS[0];
            let (f, df) = e.seen_from(oj, b)?;
            c[(i, j)] = extract_c_at(ell, s, b, f, df)?;
        }
    }
    Ok(c)
}

/// Both sides of the Maass-Selberg relation for the cylinder.
#[derive(Debug, Clone, PartialEq)]
pub struct MaassSelberg {
    pub lhs: CMatrix,
    pub rhs: CMatrix,
    pub residual: f64,
}

/// Maass-Selberg relation on the cylinder truncated at |a| < A:
/// (s(1-s) - s′(1-s′)) ∫_{|a|≥A} E_i(s) E_j(s′) da against the Wronskian sum
/// over both ends at -A.
pub fn maass_selberg_residual(ell: f64, s: Complex64, s2: Complex64, big_a: f64, cutoff: Cutoff, tol: f64) -> Result<MaassSelberg> {
    if !(big_a > 0.0 && big_a.is_finite()) {
        return Err(Error::Domain(format!("truncation height must be positive, got {big_a}")));
    }
    let e1 = ORIENTATIONS
        .iter()
        .map(|&o| CylinderEisenstein::new(ell, s, cutoff, o))
        .collect::<Result<Vec<_>>>()?;
    let e2 = ORIENTATIONS
        .iter()
        .map(|&o| CylinderEisenstein::new(ell, s2, cutoff, o))
        .collect::<Result<Vec<_>>>()?;
    let p1 = cylinder_scattering(ell, s, cutoff)?.pair;
    let p2 = cylinder_scattering(ell, s2, cutoff)?.pair;
    let lam = s * (1.0 - s) - s2 * (1.0 - s2);
    let decay = TailDecay::Algebraic(s.re + s2.re);
    let spec = QuadratureSpec::with_tolerances(1e-11, tol).with_decay(decay);
    let mut lhs = CMatrix::zeros(2, 2);
    for i in 0..2 {
        for j in 0..2 {
            let failure = RefCell::new(None);
            let g = |a: f64| {
                let r = e1[i].eval(a).and_then(|(u, _)| Ok(u * e2[j].eval(a)?.0));
                r.unwrap_or_else(|e| {
                    failure.borrow_mut().get_or_insert(e);
                    Complex64::new(0.0, 0.0)
                })
            };
            let mut total = Complex64::new(0.0, 0.0);
            for (lo, hi) in [(f64::NEG_INFINITY, -big_a), (big_a, f64::INFINITY)] {
                let mut cuts = vec![lo];
                cuts.extend(e1[i].breakpoints(lo, hi));
                cuts.push(hi);
                cuts.dedup();
                for w in cuts.windows(2) {
                    let dom = match (w[0].is_finite(), w[1].is_finite()) {
                        (false, true) => Domain::LowerTail(w[1]),
                        (true, false) => Domain::UpperTail(w[0]),
                        _ => Domain::Finite(w[0], w[1]),
                    };
                    total += integrate(g, dom, Endpoints::REGULAR, &spec)?.value;
                }
            }
            if let Some(e) = failure.into_inner() {
                return Err(e);
            }
            lhs[(i, j)] = lam * total;
        }
    }
    let w = |x: Complex64, y: Complex64| wronskian(ell, x, y, -big_a);
    let (w_dd, w_dc, w_cd, w_cc) = (w(s, s2)?, w(s, 1.0 - s2)?, w(1.0 - s, s2)?, w(1.0 - s, 1.0 - s2)?);
    let pa = ell * ell + big_a * big_a;
    let mut rhs = CMatrix::zeros(2, 2);
    for i in 0..2 {
        for j in 0..2 {
            let mut acc = Complex64::new(0.0, 0.0);
            for e in 0..2 {
                acc += p1.d[(i, e)] * p2.d[(j, e)] * w_dd
                    + p1.d[(i, e)] * p2.c[(j, e)] * w_dc
                    + p1.c[(i, e)] * p2.d[(j, e)] * w_cd
                    + p1.c[(i, e)] * p2.c[(j, e)] * w_cc;
            }
            rhs[(i, j)] = pa * acc;
        }
    }
    let residual = max_norm(&(&lhs - &rhs));
    Ok(MaassSelberg { lhs, rhs, residual })
}

/// Upper bound for |r(center)| of a function r analytic on the closed disc,
/// from its values on the boundary circle (maximum modulus principle). Used
/// where the ingredients of an identity are singular at the centre.
pub fn circle_max<F: Fn(Complex64) -> Result<f64>>(center: Complex64, radius: f64, points: usize, r: F) -> Result<f64> {
    if !(radius > 0.0) || points < 3 {
        return Err(Error::Input("circle needs a positive radius and at least 3 points".into()));
    }
    let mut m: f64 = 0.0;
    for k in 0..points {
        let t = 2.0 * PI * k as f64 / points as f64;
        m = m.max(r(center + Complex64::from_polar(radius, t))?);
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn cutoff_is_c2() {
        let k = Cutoff::new(0.2).unwrap();
        assert_eq!(k.eval(-0.5), (0.0, 0.0, 0.0));
        assert_eq!(k.eval(-0.1), (1.0, 0.0, 0.0));
        for a in [-0.4 + 1e-11, -0.2 - 1e-11] {
            let (_, d1, d2) = k.eval(a);
            assert!(d1.abs() < 1e-6 && d2.abs() < 1e-6);
        }
        let (v, _, _) = k.eval(-0.3);
        assert!((v - 0.5).abs() < 1e-15);
    }

    #[test]
    fn hermite_profile() {
        let grid: Vec<f64> = (0..41).map(|k| -2.0 + 0.04 * k as f64).collect();
        let p = ConstantModeProfile::synthesize(1.0, c(1.3, 0.2), c(1.0, 0.0), c(0.0, 0.0), grid).unwrap();
        let (f, _) = p.at(-1.01).unwrap();
        let (u, _) = mode_with_derivative(1.0, c(1.3, 0.2), 0, -1.01).unwrap();
        assert!((f - u).norm() < 1e-7);
        assert!(p.at(-3.0).is_err());
    }

    #[test]
    fn eisenstein_is_the_mode_on_its_end() {
        let (ell, s) = (1.0, c(1.3, 0.4));
        let e = CylinderEisenstein::new(ell, s, Cutoff::default_for(ell), 1.0).unwrap();
        for a in [-2.0, -0.45, -0.1] {
            let (u, du) = e.eval(a).unwrap();
            let (h, dh) = mode_with_derivative(ell, s, 0, a).unwrap();
            assert!((u - h).norm() < 1e-11 && (du - dh).norm() < 1e-10, "{a}: {u} {h}");
        }
        let (u, _) = e.eval(0.7).unwrap();
        assert!(u.norm() < 1e-11);
    }
}
