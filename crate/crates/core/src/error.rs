use thiserror::Error;

/// Errors raised by the limit computations and their numeric oracles.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (asymmetry {asymmetry:e} exceeds tolerance)")]
    NonHermitianInput { asymmetry: f64 },

    #[error("matrix is not positive semidefinite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    #[error("matrix is not an orthogonal projection ({reason})")]
    NotProjection { reason: String },

    #[error("matrix has non-finite entries")]
    NonFinite,

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: String, actual: String },

    #[error("{solver} did not converge within {sweeps} sweeps")]
    ConvergenceFailure { solver: &'static str, sweeps: usize },

    #[error("no convergence: {0}")]
    NoConvergence(String),

    #[error("value {value} lies outside the domain of {function}")]
    DomainError { function: String, value: f64 },

    #[error("compound order {k} is out of range for dimension {n}")]
    BadOrder { k: usize, n: usize },

    #[error("positive map sends the identity to zero")]
    ZeroMap,

    #[error("invalid positive map: {0}")]
    InvalidMap(String),

    #[error("invalid mean: {0}")]
    InvalidMean(String),

    #[error("the projection formula requires f(0) = 0, got {f_at_zero}")]
    RequiresVanishingAtZero { f_at_zero: f64 },

    #[error("the first argument must be positive definite")]
    RequiresPositiveDefinite,

    #[error("Renyi parameter must lie in (0, 1) or (1, inf), got {0}")]
    BadAlpha(f64),

    #[error("not a density matrix: {0}")]
    NotDensity(String),

    #[error("brute-force enumeration supports n <= {max}, got {n}")]
    TooLarge { n: usize, max: usize },

    #[error("invalid p-grid: {0}")]
    InvalidGrid(String),

    #[error("iterate is not positive semidefinite (eigenvalue {0:e})")]
    NonPositiveIterate(f64),

    #[error("{location}: {message}")]
    Input { location: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn dims(expected: impl ToString, actual: impl ToString) -> Self {
        Error::DimensionMismatch {
            expected: expected.to_string(),
            actual: actual.to_string(),
        }
    }

    pub(crate) fn input(location: impl ToString, message: impl ToString) -> Self {
        Error::Input {
            location: location.to_string(),
            message: message.to_string(),
        }
    }

    /// Numeric failures, as opposed to malformed input.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::ConvergenceFailure { .. }
                | Error::NoConvergence(_)
                | Error::NonPositiveIterate(_)
                | Error::DomainError { .. }
        )
    }
}
