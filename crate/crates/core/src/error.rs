use thiserror::Error;

/// Failure modes shared by every numerical routine in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    /// A discretization or run parameter is out of its supported range.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// The requested series diverges at this argument.
    #[error("divergent: {0}")]
    Divergence(String),

    /// An iterative refinement did not settle within its budget.
    #[error("no convergence: {what} (last = {last:e}, previous = {previous:e})")]
    Convergence {
        what: String,
        last: f64,
        previous: f64,
    },

    /// A pivot vanished during factorization.
    #[error("singular system: {0}")]
    Singular(String),

    /// A Fredholm determinant that must be positive came out nonpositive.
    #[error("determinant positivity violated: {0}")]
    Positivity(String),

    /// Two routes to the same quantity disagree beyond tolerance.
    #[error("numerical inconsistency: {0}")]
    Consistency(String),

    #[error("eigensolver failed: {0}")]
    Eigensolver(String),
}

pub type Result<T> = std::result::Result<T, Error>;
