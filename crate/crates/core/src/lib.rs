//! Numerical spectral geometry of hyperbolic surfaces under degeneration.
//!
//! Modules, bottom-up:
//! - [`special`]: log-Gamma, Gauss hypergeometric function, dilogarithm, quadrature.
//! - [`hyperbolic`]: Möbius isometries, geodesics as projective circles, the
//!   cylinder models `X_ℓ`, right-angled hexagons.
//! - [`surface`]: pants groups, gluing along graphs, length spectra.
//! - [`zeta`]: Selberg zeta factors and their pinching asymptotics.
//! - [`kernel`]: resolvent point-pair kernels and cylinder kernels.
//! - [`scattering`]: mode functions, Wronskians, approximate scattering matrices.
//! - [`transform`]: the Selberg transform and the cylinder trace formula.
//! - [`cli`]: the `pinchlab` command line.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod config;
pub mod error;
pub mod hyperbolic;
pub mod kernel;
pub mod scattering;
pub mod special;
pub mod surface;
pub mod transform;
pub mod zeta;

pub use error::{Error, Result};
pub use num_complex::Complex64;
