use thiserror::Error;

/// Errors raised by numerical operations and input validation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pole of {function} at {at}")]
    Pole { function: &'static str, at: String },

    #[error("{what} too close to a pole at {at} (distance {distance:e})")]
    PoleProximity {
        what: &'static str,
        at: String,
        distance: f64,
    },

    #[error("{what} did not converge: {detail}")]
    NonConvergence { what: &'static str, detail: String },

    #[error("tolerance not met: estimate {estimate:e} exceeds target {target:e}")]
    ToleranceNotMet { estimate: f64, target: f64 },

    #[error("invalid interval [{lower}, {upper}]")]
    InvalidInterval { lower: f64, upper: f64 },

    #[error("argument outside supported domain: {0}")]
    Domain(String),

    #[error("argument on or beyond a branch cut: {0}")]
    Branch(String),

    #[error("degenerate geometry: {0}")]
    Degenerate(String),

    #[error("isometry is not hyperbolic (trace {trace})")]
    NotHyperbolic { trace: f64 },

    #[error("invalid graph: {0}")]
    GraphInvalid(String),

    #[error("enumeration budget exceeded; lengths certified up to r = {certified_r}")]
    BudgetExceeded { certified_r: f64 },

    #[error("tail cannot be certified: {0}")]
    TailNotCertifiable(String),

    #[error("matrix is singular or badly conditioned (condition estimate {condition:e})")]
    SingularMatrix { condition: f64 },

    #[error("invalid input: {0}")]
    Input(String),
}

impl Error {
    /// Stable snake_case identifier used in machine-readable reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Pole { .. } => "pole",
            Error::PoleProximity { .. } => "pole_proximity",
            Error::NonConvergence { .. } => "non_convergence",
            Error::ToleranceNotMet { .. } => "tolerance_not_met",
            Error::InvalidInterval { .. } => "invalid_interval",
            Error::Domain(_) => "domain",
            Error::Branch(_) => "branch",
            Error::Degenerate(_) => "degenerate",
            Error::NotHyperbolic { .. } => "not_hyperbolic",
            Error::GraphInvalid(_) => "graph_invalid",
            Error::BudgetExceeded { .. } => "budget_exceeded",
            Error::TailNotCertifiable(_) => "tail_not_certifiable",
            Error::SingularMatrix { .. } => "singular_matrix",
            Error::Input(_) => "input",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
