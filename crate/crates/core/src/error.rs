use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("singular input: {0}")]
    Singular(String),
    #[error("outside the admissible region: {0}")]
    Region(String),
    #[error("curve tracing failed: {0}")]
    Tracing(String),
    #[error("insufficient precision: {0}")]
    Precision(String),
    #[error("quadrature did not converge: {0}")]
    Quadrature(String),
    #[error("series truncation did not converge: {0}")]
    Truncation(String),
    #[error("catastrophic cancellation: {0}")]
    Cancellation(String),
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for failures caused by floating-point limits rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Precision(_)
                | Error::Quadrature(_)
                | Error::Truncation(_)
                | Error::Cancellation(_)
                | Error::Tracing(_)
        )
    }
}
