//! Complex special functions and adaptive quadrature.

mod dilog;
mod gamma;
mod hypergeometric;
mod quadrature;

pub use dilog::dilog;
pub use gamma::{beta_real, digamma, gamma, ln_gamma_real, log_gamma, rgamma, riemann_zeta_real};
pub use hypergeometric::{hyp2f1, hyp2f1_derivative, hyp2f1_with_derivative};
pub use quadrature::{
    gauss_legendre, integrate, integrate_real, kronrod_15, CutoffPolicy, Domain, Endpoints, Integral, QuadratureSpec, TailDecay,
};

use num_complex::Complex64;

/// log(1 + z) accurate for small |z|.
pub fn ln_1p(z: Complex64) -> Complex64 {
    if z.norm() < 0.5 {
        let re = 0.5 * (2.0 * z.re + z.norm_sqr()).ln_1p();
        let im = z.im.atan2(1.0 + z.re);
        Complex64::new(re, im)
    } else {
        (1.0 + z).ln()
    }
}

/// exp(z) - 1 accurate for small |z|.
pub fn exp_m1(z: Complex64) -> Complex64 {
    if z.norm() < 0.5 {
        // e^{x+iy} - 1 = (e^x - 1) cos y - 2 sin^2(y/2) + i e^x sin y
        let em1 = z.re.exp_m1();
        let half = (0.5 * z.im).sin();
        Complex64::new(em1 * z.im.cos() - 2.0 * half * half, z.re.exp() * z.im.sin())
    } else {
        z.exp() - 1.0
    }
}
