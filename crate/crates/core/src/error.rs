use alloc::string::String;

/// Errors raised by the exact kernels.
///
/// Validation failures carry a human-readable description of the first
/// violation found (which triple, which degree, which entry).
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("domain violation: {0}")]
    Violation(String),

    #[error("resource limit exceeded: {what} needs {requested} coordinates, cap is {cap}")]
    ResourceLimit {
        what: String,
        requested: usize,
        cap: usize,
    },

    #[error("algebra is not commutative: {0}")]
    NonCommutative(String),

    #[error("window too small: {0}")]
    WindowTooSmall(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub fn violation(msg: impl Into<String>) -> Self {
        Error::Violation(msg.into())
    }

    /// `true` for the resource-cap family (maps to a distinct CLI exit code).
    pub fn is_resource_limit(&self) -> bool {
        matches!(self, Error::ResourceLimit { .. })
    }
}

pub type Result<T> = core::result::Result<T, Error>;
