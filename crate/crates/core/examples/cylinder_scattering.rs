//! Approximate scattering matrices of an elementary cylinder and their identities.

use pinchlab::scattering::{cylinder_scattering, max_norm, CMatrix, Cutoff};
use pinchlab::Complex64;

fn main() -> pinchlab::Result<()> {
    for (ell, s) in [(0.5, Complex64::new(1.2, 0.3)), (0.2, Complex64::new(0.8, 2.0))] {
        let out = cylinder_scattering(ell, s, Cutoff::default_for(ell))?;
        let p = &out.pair;
        println!("ℓ = {ell}, s = {s}");
        println!("  |C| = {:.2e}, |D - I| = {:.2e}", max_norm(&p.c), max_norm(&(&p.d - CMatrix::identity(2, 2))));
        println!(
            "  D-calc {:.2e}, symmetry {:.2e}, commutation {:.2e}",
            p.dcalc_residual()?,
            p.symmetry_residual(),
            p.commutation_residual()
        );
    }
    Ok(())
}
