//! Spectral and geometric sides of the resolvent trace formula on a cylinder.

use pinchlab::transform::{cylinder_trace_check, TraceConfig};
use pinchlab::Complex64;

fn main() -> pinchlab::Result<()> {
    let (s, s0) = (Complex64::new(2.0, 0.5), Complex64::new(3.0, 0.0));
    for ell in [1.0, 0.5, 0.2] {
        let r = cylinder_trace_check(ell, &TraceConfig::new(s, s0, 1.0)?)?;
        println!("ℓ = {ell}: lhs {:.12}, rhs {:.12}, residual {:.2e}", r.lhs, r.rhs, r.residual);
    }
    Ok(())
}
