use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum LogError {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("numeric range exceeded: {0}")]
    NumericRange(String),

    #[error("ill-conditioned: {0}")]
    IllConditioned(String),

    #[error("outside the domain of the operation: {0}")]
    Domain(String),

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("matrix is not semi-simple (an eigenvalue has a non-trivial Jordan block)")]
    NotSemisimple,

    #[error("no real logarithm: negative eigenvalue {eigenvalue} has odd multiplicity {multiplicity}")]
    NoRealLogarithm { eigenvalue: f64, multiplicity: usize },

    #[error("matrix is not special orthogonal: {0}")]
    NotSpecialOrthogonal(String),

    #[error("branch is not admissible for this spectrum: {0}")]
    InvalidBranch(String),

    #[error("degenerate sample: {0}")]
    DegenerateSample(String),
}

/// Coarse classification of a [`LogError`], used to pick process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Usage,
    MathDomain,
    IllConditioned,
}

impl LogError {
    /// Stable kebab-case name, emitted in machine-readable error reports.
    pub fn name(&self) -> &'static str {
        match self {
            LogError::InvalidInput(_) => "invalid-input",
            LogError::NumericRange(_) => "numeric-range",
            LogError::IllConditioned(_) => "ill-conditioned",
            LogError::Domain(_) => "domain",
            LogError::SingularMatrix => "singular-matrix",
            LogError::NotSemisimple => "not-semisimple",
            LogError::NoRealLogarithm { .. } => "no-real-logarithm",
            LogError::NotSpecialOrthogonal(_) => "not-special-orthogonal",
            LogError::InvalidBranch(_) => "invalid-branch",
            LogError::DegenerateSample(_) => "degenerate-sample",
        }
    }

    pub fn class(&self) -> ErrorClass {
        match self {
            LogError::InvalidInput(_) => ErrorClass::Usage,
            LogError::Domain(_)
            | LogError::SingularMatrix
            | LogError::NotSemisimple
            | LogError::NoRealLogarithm { .. }
            | LogError::NotSpecialOrthogonal(_)
            | LogError::InvalidBranch(_) => ErrorClass::MathDomain,
            LogError::NumericRange(_)
            | LogError::IllConditioned(_)
            | LogError::DegenerateSample(_) => ErrorClass::IllConditioned,
        }
    }
}

pub type Result<T> = std::result::Result<T, LogError>;
