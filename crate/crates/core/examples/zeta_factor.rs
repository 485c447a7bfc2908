//! Zeta factor of a single geodesic and the truncated product over a spectrum.

use pinchlab::surface::{assemble, length_spectrum, AugmentedGraph};
use pinchlab::zeta::{zeta_factor, zeta_truncated};
use pinchlab::Complex64;

fn main() -> pinchlab::Result<()> {
    let s = Complex64::new(2.0, 0.5);
    let z = zeta_factor(0.5, s, 1e-14)?;
    println!("𝒵_0.5({s}) = {} ± {:.1e} ({} terms)", z.value, z.error_bound, z.terms);

    let (g, l) = AugmentedGraph::once_punctured_torus(1.0, 0.0, 0.0)?;
    let sp = length_spectrum(&assemble(&g, &l)?, 6.0, 1e-9)?;
    let z = zeta_truncated(&sp, s, 1e-14)?;
    println!("torus, lengths ≤ 6: 𝒵({s}) ≈ {} over {} lengths", z.value, sp.entries.len());
    Ok(())
}
