use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("subgroup is not contained in the ambient set")]
    NotContained,

    #[error("not a frame: lower bound {lower:e} is not above tolerance relative to upper bound {upper:e}")]
    NotAFrame { lower: f64, upper: f64 },

    #[error("vector {index} is linearly dependent on its predecessors")]
    LinearDependence { index: usize },

    #[error("dimension error: {0}")]
    Dimension(String),
}

impl Error {
    /// Whether the failure comes from the numbers rather than from malformed input.
    pub fn is_numeric(&self) -> bool {
        matches!(self, Error::NotAFrame { .. } | Error::LinearDependence { .. })
    }
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

pub(crate) fn shape(msg: impl Into<String>) -> Error {
    Error::ShapeMismatch(msg.into())
}
