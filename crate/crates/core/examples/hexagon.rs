//! Right-angled hexagons and the cosh formula for their sides.

use pinchlab::hyperbolic::hexagon;

fn main() -> pinchlab::Result<()> {
    for lengths in [[1.0, 1.0, 1.0], [0.5, 2.0, 3.0], [0.0, 1.0, 1.0]] {
        let h = hexagon(lengths[0], lengths[1], lengths[2])?;
        println!("ℓ = {lengths:?}: m = {:.12}, cosh of opposite sides = {:?}", h.m, h.cosh_tl);
    }
    Ok(())
}
