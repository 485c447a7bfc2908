//! Isometries, geodesics and the cylinder models of the hyperbolic plane.

mod circle;
mod cylinder;
mod hexagon;
mod mobius;

pub use circle::{geodesic_distance, inversive_product, q_form, ProjectiveCircle, Reflection};
pub use cylinder::{
    collar_half_width, collar_interval, distance, model_to_halfplane, sigma, CylinderPoint, Interval,
};
pub use hexagon::{cosh_tl, hexagon, hexagon_radical, Hexagon};
pub use mobius::{
    halfplane_distance, halfplane_sigma, BoundaryPoint, Classification, MobiusMatrix, PARABOLIC_BAND,
};

/// translation_length as a free function.
pub fn translation_length(m: &MobiusMatrix) -> crate::Result<f64> {
    m.translation_length()
}
