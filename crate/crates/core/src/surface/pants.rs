use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hyperbolic::{hexagon, Classification, Hexagon, MobiusMatrix, ProjectiveCircle};

/// Generators γ1, γ2, γ3 of a pair of pants with γ3γ2γ1 = ±I.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PantsGroup {
    pub gamma: [MobiusMatrix; 3],
    pub lengths: [f64; 3],
    pub hexagon: Hexagon,
}

/// γ_i = σ_{i+2}σ_{i+1}, σ_k the reflection in the hexagon side T_k.
pub fn build_pants(l1: f64, l2: f64, l3: f64) -> Result<PantsGroup> {
    let hexagon = hexagon(l1, l2, l3)?;
    let r = [
        hexagon.t[0].reflection()?,
        hexagon.t[1].reflection()?,
        hexagon.t[2].reflection()?,
    ];
    let gamma = [0, 1, 2].map(|i| r[(i + 2) % 3].then_after(&r[(i + 1) % 3]));
    Ok(PantsGroup {
        gamma,
        lengths: [l1, l2, l3],
        hexagon,
    })
}

/// Fixed point of a parabolic element.
pub fn parabolic_fixed_point(m: &MobiusMatrix) -> f64 {
    if m.c.abs() <= 1e-14 * (m.a.abs() + m.d.abs()) {
        f64::INFINITY
    } else {
        (m.a - m.d) / (2.0 * m.c)
    }
}

impl PantsGroup {
    /// Max-norm distance of γ3γ2γ1 from ±I.
    pub fn relation_residual(&self) -> f64 {
        self.gamma[2].mul(&self.gamma[1]).mul(&self.gamma[0]).distance_to_identity()
    }

    pub fn is_cusp(&self, i: usize) -> bool {
        self.gamma[i].classify() != Classification::Hyperbolic
    }

    /// Axis S_i of γ_i, when hyperbolic.
    pub fn axis(&self, i: usize) -> Result<ProjectiveCircle> {
        let (p, q) = self.gamma[i].fixed_points()?;
        ProjectiveCircle::geodesic(p, q)?.normalized()
    }

    /// Points on the axis S_i spaced at most `spacing` apart over one period.
    pub fn axis_samples(&self, i: usize, spacing: f64) -> Result<Vec<Complex64>> {
        let frame = self.gamma[i].axis_frame()?;
        let ell = self.gamma[i].translation_length()?;
        let n = (ell / spacing).ceil().max(1.0) as usize;
        Ok((0..n)
            .map(|k| frame.apply(Complex64::new(0.0, (ell * k as f64 / n as f64).exp())))
            .collect())
    }

    /// Width of the standard embedded collar about S_i, asinh(1/sinh(ℓ_i/2)).
    pub fn collar_width(&self, i: usize) -> f64 {
        (1.0 / (0.5 * self.lengths[i]).sinh()).asinh()
    }

    /// Cusp frame for a parabolic γ_i: an isometry M sending the cusp to
    /// infinity, and the translation length c of M γ_i M^{-1}.
    pub fn cusp_frame(&self, i: usize) -> (MobiusMatrix, f64) {
        let v = parabolic_fixed_point(&self.gamma[i]);
        let m = if v.is_infinite() {
            MobiusMatrix::IDENTITY
        } else {
            MobiusMatrix::new(0.0, -1.0, 1.0, -v)
        };
        let t = self.gamma[i].conjugate_by(&m);
        (m, (t.b / t.d).abs())
    }

    /// The seam T_k as (A, lo, hi): A maps i e^t, t in [lo, hi], onto the
    /// part of T_k between S_{k-1} and S_{k+1}, cut at the length-2
    /// horocycles of cusps. With `thick`, the standard collars are removed too.
    pub fn seam(&self, k: usize, thick: bool) -> Result<(MobiusMatrix, f64, f64)> {
        let (p, q) = self.hexagon.t[k].endpoints()?;
        let a = if q.is_infinite() {
            MobiusMatrix::new(1.0, p, 0.0, 1.0)
        } else {
            MobiusMatrix::normalized(q, p, 1.0, 1.0)?
        };
        let ai = a.inverse();
        let mut ends = Vec::with_capacity(2);
        for j in [(k + 2) % 3, (k + 1) % 3] {
            if self.is_cusp(j) {
                let g = self.gamma[j].conjugate_by(&ai);
                if parabolic_fixed_point(&g).is_infinite() {
                    ends.push(((0.5 * (g.b / g.d).abs()).ln(), 0.0));
                } else {
                    let h = g.conjugate_by(&MobiusMatrix::half_turn());
                    ends.push((-(0.5 * (h.b / h.d).abs()).ln(), 0.0));
                }
            } else {
                let s = self.axis(j)?.image(&ai)?;
                let (x0, x1) = s.endpoints()?;
                if x1.is_infinite() || (x0 + x1).abs() > 1e-8 * (x1 - x0).abs() {
                    return Err(Error::Degenerate("seam is not perpendicular to the boundary axis".into()));
                }
                ends.push(((0.5 * (x1 - x0)).ln(), if thick { self.collar_width(j) } else { 0.0 }));
            }
        }
        let (lo, hi) = if ends[0].0 < ends[1].0 { (ends[0], ends[1]) } else { (ends[1], ends[0]) };
        Ok((a, lo.0 + lo.1, hi.0 - hi.1))
    }

    /// Points spaced at most `spacing` apart along the seam T_k.
    pub fn seam_samples(&self, k: usize, spacing: f64, thick: bool) -> Result<Vec<Complex64>> {
        let (a, lo, hi) = self.seam(k, thick)?;
        Ok(segment(lo, hi, spacing).map(|t| a.apply(Complex64::new(0.0, t.exp()))).collect())
    }

    /// Points spaced at most `spacing` apart on the boundary of the thick part:
    /// seams outside the collars and cusp regions, one period of each collar
    /// boundary curve on the pants side, and one period of each length-2
    /// horocycle.
    pub fn thick_boundary_samples(&self, spacing: f64) -> Result<Vec<Complex64>> {
        let mut out = Vec::new();
        for k in 0..3 {
            out.extend(self.seam_samples(k, spacing, true)?);
        }
        for j in 0..3 {
            if self.is_cusp(j) {
                let (m, c) = self.cusp_frame(j);
                let mi = m.inverse();
                let n = (2.0 / spacing).ceil() as usize;
                out.extend((0..n).map(|i| mi.apply(Complex64::new(c * i as f64 / n as f64, 0.5 * c))));
            } else {
                let frame = self.gamma[j].axis_frame()?;
                let (a, lo, hi) = self.seam((j + 1) % 3, false)?;
                let inside = frame.inverse().apply(a.apply(Complex64::new(0.0, (0.5 * (lo + hi)).exp())));
                let w = self.collar_width(j);
                let dir = Complex64::new(w.tanh() * inside.re.signum(), 1.0 / w.cosh());
                let ell = self.lengths[j];
                let n = (ell * w.cosh() / spacing).ceil().max(1.0) as usize;
                out.extend((0..n).map(|i| frame.apply(dir * (ell * i as f64 / n as f64).exp())));
            }
        }
        Ok(out)
    }
}

fn segment(lo: f64, hi: f64, spacing: f64) -> impl Iterator<Item = f64> {
    let (lo, hi) = if lo <= hi { (lo, hi) } else { (0.5 * (lo + hi), 0.5 * (lo + hi)) };
    let n = ((hi - lo) / spacing).ceil().max(1.0) as usize;
    (0..=n).map(move |m| lo + (hi - lo) * m as f64 / n as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperbolic::halfplane_distance;

    #[test]
    fn generator_lengths() {
        let p = build_pants(1.0, 2.0, 3.0).unwrap();
        for (i, l) in [1.0, 2.0, 3.0].iter().enumerate() {
            assert!((p.gamma[i].translation_length().unwrap() - l).abs() < 1e-9);
        }
        assert!(p.relation_residual() < 1e-9);
    }

    #[test]
    fn cusp_generator() {
        let p = build_pants(0.0, 0.8, 0.8).unwrap();
        assert_eq!(p.gamma[0].classify(), Classification::Parabolic);
        assert!(p.relation_residual() < 1e-9);
    }

    #[test]
    fn relation_generic() {
        let p = build_pants(0.7, 1.1, 2.3).unwrap();
        assert!(p.relation_residual() < 1e-9);
    }

    #[test]
    fn seams_connect_boundaries() {
        let p = build_pants(1.0, 2.0, 3.0).unwrap();
        for k in 0..3 {
            let pts = p.seam_samples(k, 0.5, false).unwrap();
            for w in pts.windows(2) {
                assert!(halfplane_distance(w[0], w[1]) <= 0.5 + 1e-9);
            }
            let ends = [pts[0], pts[pts.len() - 1]];
            for j in [(k + 1) % 3, (k + 2) % 3] {
                let g = p.gamma[j];
                let best = ends
                    .iter()
                    .map(|z| (halfplane_distance(*z, g.apply(*z)) - p.lengths[j]).abs())
                    .fold(f64::INFINITY, f64::min);
                assert!(best < 1e-8);
            }
        }
    }
}
