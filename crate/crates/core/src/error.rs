use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("degenerate constraint: both coefficients vanish")]
    DegenerateConstraint,
    #[error("not a plane: the generators are linearly dependent")]
    NotAPlane,
    #[error("not primitive: vector is not primitive in the lattice")]
    NotPrimitive,
    #[error("improper subtorus: contained in a coordinate hyperplane")]
    ImproperSubtorus,
    #[error("degenerate slice; project first")]
    DegenerateSlice,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("zero vector")]
    ZeroVector,
    #[error("line lies in the identity component of the slice")]
    LineInSlice,
    #[error("point is not on the subtorus")]
    NotOnSubtorus,
    #[error("tight-instance data unavailable for n = {n}, d = {d}")]
    Unsupported { n: usize, d: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    /// True for errors caused by malformed textual input.
    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse(_))
    }

    /// True for requests outside the supported input range.
    pub fn is_unsupported(&self) -> bool {
        matches!(self, Error::Unsupported { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
