//! 𝒵/𝒵_ℓ for a once-punctured torus while its systole is pinched.

use pinchlab::cli::selfcheck::torus_quotient;
use pinchlab::Complex64;

fn main() -> pinchlab::Result<()> {
    let s = Complex64::new(2.0, 0.0);
    for ell in [1.0, 0.5, 0.3, 0.2] {
        println!("ℓ = {ell}: quotient {:.10}", torus_quotient(ell, s, 6.0)?);
    }
    Ok(())
}
