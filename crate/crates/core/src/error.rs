use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IssError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Boundary configurations the energy argument cannot handle (b2 = 0).
    #[error("unsupported boundary: {0}")]
    UnsupportedBoundary(String),

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("non-finite state at t = {time}")]
    BlowUp { time: f64 },
}

pub type Result<T> = std::result::Result<T, IssError>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(IssError::InvalidArgument(msg.into()))
}
