use thiserror::Error;

#[derive(Debug, Error)]
pub enum SmuError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("state error: {0}")]
    State(String),
    #[error("non-finite value at epoch {epoch} in {location}")]
    Divergence { epoch: usize, location: String },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = SmuError> = std::result::Result<T, E>;
