use thiserror::Error;

/// Errors raised by the numerical kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("argument outside the supported window: {0}")]
    Range(String),
    #[error("overflow guard exceeded: {0}")]
    Overflow(String),
    #[error("result not representable in double precision: {0}")]
    Underflow(String),
    #[error("internal convergence failure: {0}")]
    Accuracy(String),
    #[error("no sign change in certified bracket: {0}")]
    Bracket(String),
    #[error("bracket refinement stalled: {0}")]
    Convergence(String),
    #[error("request exceeds the numerical window: {0}")]
    Window(String),
    #[error("operation requires d = 2, got d = {0}")]
    Dimension(u32),
    #[error("invalid problem specification: {0}")]
    InvalidSpec(String),
    #[error("insufficient sample span: {0}")]
    InsufficientSpan(String),
}

impl Error {
    /// True for failures caused by the numerical window or by evaluator accuracy,
    /// as opposed to malformed input.
    pub fn is_numerical(&self) -> bool {
        !matches!(self, Error::InvalidSpec(_) | Error::Dimension(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
