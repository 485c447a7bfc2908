//! Mode functions on cylinders, Wronskians, scattering pairs (C, D) and their
//! identities.

pub mod cylinder;
pub mod matrices;
pub mod modes;

pub use cylinder::{
    circle_max, cylinder_c, cylinder_scattering, extract_c_at, extract_cd, extract_cd_at, maass_selberg_residual,
    ConstantModeProfile, Cutoff, CylinderEisenstein, CylinderScattering, MaassSelberg, EXTRACTION_POINTS,
};
pub use matrices::{
    condition_estimate, cprime, d_from_c, frobenius, gamma_factor, identity_residuals, lambda_power, lhp_c_asymptote,
    max_norm, sigma_matrix, CMatrix, Ends, IdentityReport, Residual, ScatteringPair,
};
pub use modes::{
    center_form, connected_mode, connection_coefficients, continued_mode, hypergeometric_form, mode_derivative,
    mode_function, mode_with_derivative, ode_continue, ode_residual, wronskian, POLE_GUARD,
};
