//! Zero-mode functions on a cylinder, their Wronskian and connection coefficients.

use pinchlab::scattering::{connection_coefficients, mode_with_derivative, wronskian};
use pinchlab::Complex64;

fn main() -> pinchlab::Result<()> {
    let (ell, s) = (0.5, Complex64::new(0.75, 1.0));
    for a in [-3.0, -1.0, -0.2] {
        let (u, du) = mode_with_derivative(ell, s, 0, a)?;
        println!("a = {a}: mode {u:.12}, derivative {du:.12}");
    }
    let sp = 1.0 - s;
    for a in [-3.0, -1.0, -0.2] {
        println!("W(s, 1-s) at a = {a}: {:.14}", wronskian(ell, s, sp, a)?);
    }
    let (alpha, beta) = connection_coefficients(s)?;
    println!("connection coefficients {alpha:.12}, {beta:.12}");
    Ok(())
}
