//! The Maass-Selberg relation on an elementary cylinder.

use pinchlab::scattering::{maass_selberg_residual, Cutoff};
use pinchlab::Complex64;

fn main() -> pinchlab::Result<()> {
    let ell = 0.5;
    let (s, sp) = (Complex64::new(1.3, 0.4), Complex64::new(2.1, -0.2));
    for a in [0.5, 1.0, 2.0] {
        let r = maass_selberg_residual(ell, s, sp, a, Cutoff::default_for(ell), 1e-10)?;
        println!("A = {a}: residual {:.3e}", r.residual);
    }
    Ok(())
}
