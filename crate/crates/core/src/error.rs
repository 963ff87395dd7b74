use thiserror::Error;

/// Errors raised anywhere in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A coefficient was evaluated at or beyond a tangent pole, or an
    /// argument fell outside the domain of a formula.
    #[error("domain error: {0}")]
    Domain(String),

    /// The interval [-D/2, D/2] reaches a coefficient singularity.
    #[error("invalid diameter {diameter}: the model problem requires D < {max_diameter}")]
    InvalidDiameter { diameter: f64, max_diameter: f64 },

    /// A scalar input failed validation.
    #[error("{0}")]
    InvalidParameter(String),

    /// The hypothesis of a classical bound is not satisfied by the inputs.
    #[error("hypothesis not met: {0}")]
    Hypothesis(String),

    /// Mesh refinement ran out of budget before reaching the tolerance.
    #[error("no convergence after {refinements} refinements: estimated error {est_error:e} exceeds {target:e}")]
    NoConvergence {
        refinements: usize,
        est_error: f64,
        target: f64,
    },

    /// The shooting residual did not change sign below the search ceiling.
    #[error("no sign change of the shooting residual below mu = {ceiling}")]
    BracketFailure { ceiling: f64 },

    /// Input data violate the precondition of a check.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A proof-replay certificate has a failing step.
    #[error("certificate failure at step `{step}`")]
    CertificateFailure { step: String },
}

impl Error {
    /// Stable machine-readable name of the error variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "DomainError",
            Error::InvalidDiameter { .. } => "InvalidDiameter",
            Error::InvalidParameter(_) => "InvalidParameter",
            Error::Hypothesis(_) => "HypothesisError",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::BracketFailure { .. } => "BracketFailure",
            Error::Precondition(_) => "PreconditionError",
            Error::CertificateFailure { .. } => "CertificateFailure",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
