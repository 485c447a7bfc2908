use serde::{Deserialize, Serialize};

use super::mobius::{BoundaryPoint, MobiusMatrix};
use crate::error::{Error, Result};

const GEODESIC_TOL: f64 = 1e-12;

/// The generalized circle {a0 |x|^2 - 2 <x, (a1, a2)> + a3 = 0} of the extended
/// plane, as a projective 4-vector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProjectiveCircle {
    pub a: [f64; 4],
}

/// Symmetric bilinear form q(a, b) = 2(a1 b1 + a2 b2) - a0 b3 - a3 b0.
pub fn q_form(a: &[f64; 4], b: &[f64; 4]) -> f64 {
    2.0 * (a[1] * b[1] + a[2] * b[2]) - a[0] * b[3] - a[3] * b[0]
}

/// |q(a,b)| / (|q(a,a)| |q(b,b)|)^{1/2}; cosh of the distance for disjoint
/// geodesics, the cosine of the angle for intersecting ones.
pub fn inversive_product(s: &ProjectiveCircle, t: &ProjectiveCircle) -> Result<f64> {
    let qs = q_form(&s.a, &s.a);
    let qt = q_form(&t.a, &t.a);
    if qs == 0.0 || qt == 0.0 {
        return Err(Error::Degenerate("sphere with vanishing self-product".into()));
    }
    Ok(q_form(&s.a, &t.a).abs() / (qs.abs().sqrt() * qt.abs().sqrt()))
}

/// Orientation-reversing isometry z -> (a conj(z) + b)/(c conj(z) + d), det -1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Reflection {
    pub matrix: MobiusMatrix,
}

impl Reflection {
    /// Composite self ∘ other, an orientation-preserving isometry.
    pub fn then_after(&self, other: &Reflection) -> MobiusMatrix {
        self.matrix.mul(&other.matrix)
    }
}

impl ProjectiveCircle {
    pub fn new(a: [f64; 4]) -> Self {
        ProjectiveCircle { a }
    }

    /// Circle orthogonal to the real axis with the given real center.
    pub fn from_center_radius(center: f64, radius: f64) -> Self {
        ProjectiveCircle::new([1.0, center, 0.0, center * center - radius * radius])
    }

    pub fn vertical_line(x: f64) -> Self {
        ProjectiveCircle::new([0.0, 1.0, 0.0, 2.0 * x])
    }

    /// Geodesic of the half-plane with boundary points p and q (either may be
    /// infinite, not both).
    pub fn geodesic(p: BoundaryPoint, q: BoundaryPoint) -> Result<Self> {
        match (p.is_infinite(), q.is_infinite()) {
            (true, true) => Err(Error::Degenerate("geodesic with both ends at infinity".into())),
            (true, false) => Ok(ProjectiveCircle::vertical_line(q)),
            (false, true) => Ok(ProjectiveCircle::vertical_line(p)),
            (false, false) => {
                if p == q {
                    return Err(Error::Degenerate("geodesic with coincident ends".into()));
                }
                Ok(ProjectiveCircle::new([1.0, 0.5 * (p + q), 0.0, p * q]))
            }
        }
    }

    pub fn q_self(&self) -> f64 {
        q_form(&self.a, &self.a)
    }

    /// Rescaled to q_self = 2 with a0 >= 0 (a1 > 0 for lines).
    pub fn normalized(&self) -> Result<Self> {
        let q = self.q_self();
        if !(q > 0.0) {
            return Err(Error::Degenerate(format!("circle with q_self = {q}")));
        }
        let mut k = (2.0 / q).sqrt();
        if self.a[0] < 0.0 || (self.a[0] == 0.0 && self.a[1] < 0.0) {
            k = -k;
        }
        Ok(ProjectiveCircle::new(self.a.map(|x| x * k)))
    }

    pub fn is_geodesic(&self) -> bool {
        let scale = self.a.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        self.a[2].abs() <= GEODESIC_TOL * scale
    }

    /// Boundary points of a geodesic, the smaller finite one first; a vertical
    /// line returns (x, infinity).
    pub fn endpoints(&self) -> Result<(BoundaryPoint, BoundaryPoint)> {
        if !self.is_geodesic() {
            return Err(Error::Degenerate("circle is not orthogonal to the real axis".into()));
        }
        let [a0, a1, _, a3] = self.a;
        let scale = a1.abs().max(a3.abs());
        if a0.abs() <= GEODESIC_TOL * scale {
            return Ok((a3 / (2.0 * a1), f64::INFINITY));
        }
        let c = a1 / a0;
        let r2 = (a1 * a1 - a0 * a3) / (a0 * a0);
        if !(r2 > 0.0) {
            return Err(Error::Degenerate("circle with non-positive radius".into()));
        }
        let r = r2.sqrt();
        Ok((c - r, c + r))
    }

    /// Image of a geodesic under an isometry.
    pub fn image(&self, m: &MobiusMatrix) -> Result<Self> {
        let (p, q) = self.endpoints()?;
        ProjectiveCircle::geodesic(m.apply_boundary(p), m.apply_boundary(q))?.normalized()
    }

    /// Reflection in a geodesic.
    pub fn reflection(&self) -> Result<Reflection> {
        if !self.is_geodesic() {
            return Err(Error::Degenerate("reflection needs a geodesic".into()));
        }
        let n = self.normalized()?;
        let [a0, a1, _, a3] = n.a;
        Ok(Reflection {
            matrix: MobiusMatrix::new(a1, -a3, a0, -a1),
        })
    }
}

/// Hyperbolic distance between disjoint geodesics.
pub fn geodesic_distance(s: &ProjectiveCircle, t: &ProjectiveCircle) -> Result<f64> {
    let ip = inversive_product(s, t)?;
    if ip < 1.0 {
        return Err(Error::Degenerate(format!("geodesics intersect (inversive product {ip})")));
    }
    Ok(ip.acosh())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn perpendicular() {
        let axis = ProjectiveCircle::new([0.0, 1.0, 0.0, 0.0]);
        for a3 in [1.0, -1.0] {
            let unit = ProjectiveCircle::new([1.0, 0.0, 0.0, a3]);
            assert!(inversive_product(&unit, &axis).unwrap().abs() < 1e-15);
        }
        let unit = ProjectiveCircle::new([1.0, 0.0, 0.0, -1.0]);
        assert!((inversive_product(&unit, &unit).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn concentric_distance() {
        let s = ProjectiveCircle::from_center_radius(0.0, 1.0);
        let t = ProjectiveCircle::from_center_radius(0.0, std::f64::consts::E);
        assert!((geodesic_distance(&s, &t).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn reflection_fixes_geodesic() {
        let g = ProjectiveCircle::geodesic(-0.5, 2.0).unwrap();
        let r = g.reflection().unwrap();
        assert!((r.matrix.det() + 1.0).abs() < 1e-14);
        // point on the geodesic: center 0.75, radius 1.25
        let z = Complex64::new(0.75, 0.0) + Complex64::from_polar(1.25, 1.0);
        let w = (z.conj() * r.matrix.a + r.matrix.b) / (z.conj() * r.matrix.c + r.matrix.d);
        assert!((w - z).norm() < 1e-14);
        let line = ProjectiveCircle::vertical_line(0.3).reflection().unwrap();
        let z = Complex64::new(1.0, 2.0);
        let w = (z.conj() * line.matrix.a + line.matrix.b) / (z.conj() * line.matrix.c + line.matrix.d);
        assert!((w - Complex64::new(-0.4, 2.0)).norm() < 1e-14);
    }
}
