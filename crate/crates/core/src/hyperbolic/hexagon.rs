use serde::{Deserialize, Serialize};

use super::circle::{inversive_product, ProjectiveCircle};
use crate::error::{Error, Result};

/// The right-angled hexagon data of a pair of pants with boundary lengths
/// (ℓ1, ℓ2, ℓ3), realized in the upper half-plane with the ideal triangle
/// vertices (v1, v2, v3) = (0, 1, ∞).
///
/// `l[i]` is the side of the ideal triangle opposite `v_i`; `t[i]` meets the
/// boundary at `v_i`, and `t[i+1]`, `t[i+2]` are at distance ℓ_i/2.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hexagon {
    pub lengths: [f64; 3],
    pub m: f64,
    pub t: [ProjectiveCircle; 3],
    pub l: [ProjectiveCircle; 3],
    pub cosh_tl: [f64; 3],
}

/// m(ℓ1,ℓ2,ℓ3) = (Σ cosh²(ℓ_i/2) + 2 Π cosh(ℓ_i/2) - 1)^{1/2}.
pub fn hexagon_radical(lengths: [f64; 3]) -> f64 {
    let c = lengths.map(|l| (0.5 * l).cosh());
    (c[0] * c[0] + c[1] * c[1] + c[2] * c[2] + 2.0 * c[0] * c[1] * c[2] - 1.0).sqrt()
}

/// cosh d(T_i, L_i) from the boundary lengths.
pub fn cosh_tl(lengths: [f64; 3]) -> [f64; 3] {
    let c = lengths.map(|l| (0.5 * l).cosh());
    let m = hexagon_radical(lengths);
    [0, 1, 2].map(|i| (m + c[(i + 2) % 3] - c[(i + 1) % 3]) / (c[i] + 1.0))
}

/// Solves the hexagon for non-negative boundary lengths.
pub fn hexagon(l1: f64, l2: f64, l3: f64) -> Result<Hexagon> {
    let lengths = [l1, l2, l3];
    if lengths.iter().any(|l| !(*l >= 0.0) || !l.is_finite()) {
        return Err(Error::Domain(format!("boundary lengths must be finite and non-negative: {lengths:?}")));
    }
    let m = hexagon_radical(lengths);
    let k = cosh_tl(lengths);
    let l = [
        ProjectiveCircle::vertical_line(1.0),
        ProjectiveCircle::vertical_line(0.0),
        ProjectiveCircle::geodesic(0.0, 1.0)?,
    ];
    // T1 = semicircle [0, 2/(κ1+1)], T2 = semicircle [1, (κ2+1)/(κ2-1)] (the
    // line Re z = 1 when κ2 = 1), T3 = line Re z = (1-κ3)/2.
    let t = [
        ProjectiveCircle::new([k[0] + 1.0, 1.0, 0.0, 0.0]),
        ProjectiveCircle::new([k[1] - 1.0, k[1], 0.0, k[1] + 1.0]),
        ProjectiveCircle::new([0.0, 1.0, 0.0, 1.0 - k[2]]),
    ];
    let t = [t[0].normalized()?, t[1].normalized()?, t[2].normalized()?];
    let l = [l[0].normalized()?, l[1].normalized()?, l[2].normalized()?];
    Ok(Hexagon {
        lengths,
        m,
        t,
        l,
        cosh_tl: k,
    })
}

impl Hexagon {
    /// ⟨T_i, L_i⟩ minus its prediction from ⟨T_i, T_{i+1}⟩ and ⟨T_{i+1}, L_{i+1}⟩.
    pub fn recursion_residuals(&self) -> Result<[f64; 3]> {
        let mut out = [0.0; 3];
        for (i, r) in out.iter_mut().enumerate() {
            let j = (i + 1) % 3;
            let tl_i = inversive_product(&self.t[i], &self.l[i])?;
            let tt = inversive_product(&self.t[i], &self.t[j])?;
            let tl_j = inversive_product(&self.t[j], &self.l[j])?;
            *r = tl_i - (2.0 * (tt + tl_j) / (1.0 + tl_j) - 1.0);
        }
        Ok(out)
    }

    /// ⟨T_{i+1}, T_{i+2}⟩ - cosh(ℓ_i/2).
    pub fn length_residuals(&self) -> Result<[f64; 3]> {
        let mut out = [0.0; 3];
        for (i, r) in out.iter_mut().enumerate() {
            let ip = inversive_product(&self.t[(i + 1) % 3], &self.t[(i + 2) % 3])?;
            *r = ip - (0.5 * self.lengths[i]).cosh();
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ideal_triangle() {
        let h = hexagon(0.0, 0.0, 0.0).unwrap();
        assert!((h.m - 2.0).abs() < 1e-15);
        for k in h.cosh_tl {
            assert!((k - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn symmetric_lengths() {
        let h = hexagon(2.0, 2.0, 2.0).unwrap();
        let c = 1f64.cosh();
        let expected = (3.0 * c * c + 2.0 * c * c * c - 1.0).sqrt() / (c + 1.0);
        for k in h.cosh_tl {
            assert!((k - expected).abs() < 1e-14);
        }
    }

    #[test]
    fn inversive_products() {
        let h = hexagon(0.7, 1.1, 2.3).unwrap();
        for r in h.length_residuals().unwrap() {
            assert!(r.abs() < 1e-12);
        }
        for r in h.recursion_residuals().unwrap() {
            assert!(r.abs() < 1e-12);
        }
        for (i, k) in h.cosh_tl.iter().enumerate() {
            assert!((inversive_product(&h.t[i], &h.l[i]).unwrap() - k).abs() < 1e-12);
        }
    }
}
