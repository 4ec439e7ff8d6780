use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("algebra error: {0}")]
    Algebra(String),

    /// The product of two polyphase matrices is not a scaled monomial identity.
    #[error("paraunitary violation; residual matrix:\n{residual}")]
    Paraunitary { residual: String },

    #[error("factorization failed: {0}")]
    Factorization(String),

    #[error("not implemented: {0}")]
    NotImplemented(String),

    #[error("decomposition depth {depth} exceeds what length {len} supports")]
    Depth { depth: usize, len: usize },

    #[error("out of range: {0}")]
    Range(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("parse error: {0}")]
    Parse(String),
}
