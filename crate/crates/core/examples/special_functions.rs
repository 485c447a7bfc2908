//! Log-Gamma, the Gauss hypergeometric function and the dilogarithm.

use pinchlab::special::{dilog, hyp2f1, log_gamma};
use pinchlab::Complex64;

fn main() -> pinchlab::Result<()> {
    let c = Complex64::new;
    println!("log Γ(0.5) = {}", log_gamma(c(0.5, 0.0))?);
    println!("log Γ(2+3i) = {}", log_gamma(c(2.0, 3.0))?);
    let z = c(0.4, 0.2);
    println!("2F1(1,1;2;z) = {}", hyp2f1(c(1.0, 0.0), c(1.0, 0.0), c(2.0, 0.0), z)?);
    println!("-log(1-z)/z  = {}", -(1.0 - z).ln() / z);
    println!("Li2(1) = {} (π²/6 = {})", dilog(c(1.0, 0.0))?, std::f64::consts::PI.powi(2) / 6.0);
    Ok(())
}
