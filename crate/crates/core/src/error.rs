use std::path::PathBuf;

use crate::tomography::PhysicalEstimate;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("quadrature degree {degree} is below the required {required}")]
    DegreeInsufficient { degree: usize, required: usize },

    #[error("PSD projection did not converge after {} iterations (objective {:.3e})", .best.iterations, .best.objective)]
    NotConverged { best: Box<PhysicalEstimate> },

    #[error("config error: {0}")]
    Config(String),

    #[error("{context}: {source}")]
    Task {
        context: String,
        #[source]
        source: Box<Error>,
    },

    #[error("i/o error on {}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// Strips any task context wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::Task { source, .. } => source.root(),
            other => other,
        }
    }

    /// Process exit status for the CLI: 2 for config errors, 3 when the
    /// solver did not converge, 1 otherwise.
    pub fn exit_code(&self) -> u8 {
        match self.root() {
            Error::Config(_) => 2,
            Error::NotConverged { .. } => 3,
            _ => 1,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
