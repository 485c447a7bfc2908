//! Pinching asymptotics of a zeta factor and the left half-plane ratio.

use pinchlab::zeta::{lhp_reduction_ratio, pinch_asymptotic};
use pinchlab::Complex64;

fn main() -> pinchlab::Result<()> {
    let two_pi = 2.0 * std::f64::consts::PI;
    for s in [Complex64::new(0.75, 0.0), Complex64::new(1.0, 2.0)] {
        for ell in [0.2, 0.1, 0.05, 0.02] {
            let v = pinch_asymptotic(ell, s)?;
            println!("s = {s}, ℓ = {ell}: {v:.10} (relative deviation from 2π {:.2e})", (v - two_pi).norm() / two_pi);
        }
    }
    let s = Complex64::new(-0.5, 1.0);
    for ell in [0.2, 0.1, 0.05] {
        println!("left half-plane ratio at s = {s}, ℓ = {ell}: {:.10}", lhp_reduction_ratio(ell, s)?);
    }
    Ok(())
}
