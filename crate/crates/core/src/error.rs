use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Malformed input: bad name, index out of range, inconsistent sizes.
    #[error("configuration error: {0}")]
    Config(String),

    /// A state lost normalization or a matrix is not unitary.
    #[error("numerical integrity error: {0}")]
    NumericalIntegrity(String),

    /// The requested integration method cannot handle the operation.
    #[error("method error: {0}")]
    Method(String),

    /// Physical constraints of the machine are violated.
    #[error("validation failed: {}", .0.join("; "))]
    Validation(Vec<String>),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
