use thiserror::Error;

use crate::graph::Violation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for a graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("graph invariant violated: {0}")]
    InvalidGraph(Violation),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("resource limit: {0}")]
    ResourceLimit(String),

    #[error("insufficient samples: {given} given, at least {required} required")]
    InsufficientSamples { given: usize, required: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// True for errors caused by a computation budget rather than bad input.
    pub fn is_resource_limit(&self) -> bool {
        matches!(self, Error::ResourceLimit(_) | Error::InsufficientSamples { .. })
    }
}
