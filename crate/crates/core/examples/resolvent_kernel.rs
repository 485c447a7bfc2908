//! The point-pair resolvent kernel and its periodization on a cylinder.

use pinchlab::hyperbolic::CylinderPoint;
use pinchlab::kernel::{cylinder_kernel, KernelMethod, ResolventKernel};
use pinchlab::Complex64;

fn main() -> pinchlab::Result<()> {
    let s = Complex64::new(2.0, 0.0);
    let k = ResolventKernel::new(s, 1e-13)?;
    for t in [0.1, 1.0, 10.0] {
        let series = k.eval(t, KernelMethod::Series)?;
        let quad = k.eval(t, KernelMethod::Quadrature)?;
        println!("k_2({t}) quadrature {quad:.14} series {series:.14}");
    }
    let (p1, p2) = (CylinderPoint::new(0.1, 0.3), CylinderPoint::new(0.4, 0.2));
    for ell in [1.0, 0.3, 0.0] {
        let sum = cylinder_kernel(ell, s, &p1, &p2, 1e-12)?;
        println!("ℓ = {ell}: K = {:.14} ({} terms, tail ≤ {:.1e})", sum.value, sum.terms, sum.tail_bound);
    }
    Ok(())
}
