use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Band around |tr| = 2 inside which an isometry counts as parabolic.
pub const PARABOLIC_BAND: f64 = 1e-9;

/// Orientation-preserving isometry z -> (a z + b)/(c z + d) of the upper
/// half-plane, identified up to sign.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MobiusMatrix {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    Identity,
    Hyperbolic,
    Parabolic,
    Elliptic,
}

/// A point of the real projective line; `f64::INFINITY` stands for infinity.
pub type BoundaryPoint = f64;

impl MobiusMatrix {
    pub const IDENTITY: MobiusMatrix = MobiusMatrix {
        a: 1.0,
        b: 0.0,
        c: 0.0,
        d: 1.0,
    };

    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        MobiusMatrix { a, b, c, d }
    }

    /// Scales to determinant one; fails for det <= 0.
    pub fn normalized(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let det = a * d - b * c;
        if !(det > 0.0) || !det.is_finite() {
            return Err(Error::Degenerate(format!("Möbius determinant {det} is not positive")));
        }
        let k = det.sqrt().recip();
        Ok(MobiusMatrix::new(a * k, b * k, c * k, d * k))
    }

    /// diag(e^{t/2}, e^{-t/2}): translation by t along the imaginary axis.
    pub fn axis_translation(t: f64) -> Self {
        MobiusMatrix::new((0.5 * t).exp(), 0.0, 0.0, (-0.5 * t).exp())
    }

    /// z -> -1/z, the half-turn about i.
    pub fn half_turn() -> Self {
        MobiusMatrix::new(0.0, 1.0, -1.0, 0.0)
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> f64 {
        self.a + self.d
    }

    pub fn mul(&self, o: &MobiusMatrix) -> MobiusMatrix {
        MobiusMatrix::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }

    /// Inverse of a determinant-one matrix.
    pub fn inverse(&self) -> MobiusMatrix {
        let det = self.det();
        MobiusMatrix::new(self.d / det, -self.b / det, -self.c / det, self.a / det)
    }

    pub fn conjugate_by(&self, p: &MobiusMatrix) -> MobiusMatrix {
        p.mul(self).mul(&p.inverse())
    }

    pub fn apply(&self, z: Complex64) -> Complex64 {
        (z * self.a + self.b) / (z * self.c + self.d)
    }

    /// Action on the boundary, with infinity as `f64::INFINITY`.
    pub fn apply_boundary(&self, x: BoundaryPoint) -> BoundaryPoint {
        if x.is_infinite() {
            if self.c == 0.0 {
                f64::INFINITY
            } else {
                self.a / self.c
            }
        } else {
            let den = self.c * x + self.d;
            if den == 0.0 {
                f64::INFINITY
            } else {
                (self.a * x + self.b) / den
            }
        }
    }

    /// max-norm distance to the nearer of +I and -I.
    pub fn distance_to_identity(&self) -> f64 {
        let plus = (self.a - 1.0).abs().max(self.b.abs()).max(self.c.abs()).max((self.d - 1.0).abs());
        let minus = (self.a + 1.0).abs().max(self.b.abs()).max(self.c.abs()).max((self.d + 1.0).abs());
        plus.min(minus)
    }

    pub fn classify(&self) -> Classification {
        let t = self.trace().abs();
        if (t - 2.0).abs() <= PARABOLIC_BAND {
            if self.distance_to_identity() <= PARABOLIC_BAND {
                Classification::Identity
            } else {
                Classification::Parabolic
            }
        } else if t > 2.0 {
            Classification::Hyperbolic
        } else {
            Classification::Elliptic
        }
    }

    /// 2 arcosh(|tr|/2).
    pub fn translation_length(&self) -> Result<f64> {
        let t = self.trace().abs();
        if self.classify() != Classification::Hyperbolic {
            return Err(Error::NotHyperbolic { trace: self.trace() });
        }
        Ok(2.0 * (0.5 * t).acosh())
    }

    /// (attracting, repelling) fixed points of a hyperbolic element.
    pub fn fixed_points(&self) -> Result<(BoundaryPoint, BoundaryPoint)> {
        if self.classify() != Classification::Hyperbolic {
            return Err(Error::NotHyperbolic { trace: self.trace() });
        }
        let (a, b, c, d) = (self.a, self.b, self.c, self.d);
        if c == 0.0 {
            let finite = b / (d - a);
            // z -> (a/d) z + b/d: infinity attracts when |a| > |d|.
            return Ok(if a.abs() > d.abs() {
                (f64::INFINITY, finite)
            } else {
                (finite, f64::INFINITY)
            });
        }
        let disc = ((a + d) * (a + d) - 4.0 * self.det()).sqrt();
        // Roots of c z^2 + (d - a) z - b = 0, in a cancellation-free form.
        let s = if a - d >= 0.0 { 1.0 } else { -1.0 };
        let big = (a - d) + s * disc;
        let z1 = big / (2.0 * c);
        let z2 = if big == 0.0 { z1 } else { -2.0 * b / big };
        let mult = |z: f64| (c * z + d).abs();
        Ok(if mult(z1) > mult(z2) { (z1, z2) } else { (z2, z1) })
    }

    /// An isometry mapping the imaginary axis onto the axis of `self`, with
    /// infinity going to the attracting and 0 to the repelling fixed point.
    /// Conjugating by it turns `self` into diag(e^{l/2}, e^{-l/2}).
    pub fn axis_frame(&self) -> Result<MobiusMatrix> {
        let (p, q) = self.fixed_points()?;
        let m = if p.is_infinite() {
            MobiusMatrix::new(1.0, q, 0.0, 1.0)
        } else if q.is_infinite() {
            MobiusMatrix::new(p, -1.0, 1.0, 0.0)
        } else if p > q {
            MobiusMatrix::new(p, q, 1.0, 1.0)
        } else {
            MobiusMatrix::new(p, -q, 1.0, -1.0)
        };
        MobiusMatrix::normalized(m.a, m.b, m.c, m.d)
    }

    /// Real power M^tau of a hyperbolic element: translation by tau times the
    /// translation length along the same axis.
    pub fn power(&self, tau: f64) -> Result<MobiusMatrix> {
        let len = self.translation_length()?;
        let frame = self.axis_frame()?;
        Ok(MobiusMatrix::axis_translation(tau * len).conjugate_by(&frame))
    }

    pub fn to_rows(&self) -> [[f64; 2]; 2] {
        [[self.a, self.b], [self.c, self.d]]
    }
}

/// Half-plane point-pair invariant |z1 - z2|^2 / (Im z1 Im z2).
pub fn halfplane_sigma(z1: Complex64, z2: Complex64) -> f64 {
    (z1 - z2).norm_sqr() / (z1.im * z2.im)
}

/// Hyperbolic distance in the upper half-plane.
pub fn halfplane_distance(z1: Complex64, z2: Complex64) -> f64 {
    2.0 * (0.5 * halfplane_sigma(z1, z2).sqrt()).asinh()
}
