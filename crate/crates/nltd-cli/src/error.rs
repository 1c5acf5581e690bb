//! Harness-level errors, mapped onto the CLI exit codes.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("image codec error: {0}")]
    Codec(#[from] image::ImageError),

    #[error(transparent)]
    Core(#[from] nltd::Error),

    #[error("invalid arguments: {0}")]
    Usage(String),

    #[error("dataset error: {0}")]
    Dataset(String),
}

pub type Result<T> = std::result::Result<T, HarnessError>;

impl HarnessError {
    /// CLI exit code: 1 usage, 2 I/O, 3 numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Io(_) | HarnessError::Codec(_) | HarnessError::Dataset(_) => 2,
            HarnessError::Usage(_) => 1,
            HarnessError::Core(e) => match e {
                nltd::Error::NonFinite(_)
                | nltd::Error::SymmetryViolation { .. }
                | nltd::Error::ZeroWeight { .. } => 3,
                _ => 1,
            },
        }
    }
}
