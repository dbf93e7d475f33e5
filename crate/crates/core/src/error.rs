use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("zero vector does not define a projective point")]
    ZeroDirection,
    #[error("valuation {valuation} is below the requested shift {shift}")]
    ValuationTooLow { valuation: String, shift: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("configuration does not have a full-dimensional orbit")]
    NotFullDimensional,
    #[error("unknown vertex {0}")]
    UnknownVertex(usize),
    #[error("vertex {0} is not an ancestor of vertex {1}")]
    NotAncestor(usize, usize),
    #[error("invalid stratum shape: {0}")]
    InvalidShape(String),
    #[error("invalid tree: {0}")]
    InvalidTree(String),
    #[error("contraction hit the projection centre at vertex {0}")]
    ContractionDegenerate(usize),
    #[error("random incidence trials never agreed for weight vector {0:?}")]
    GenericityFailure(Vec<u32>),
    #[error("shape mismatch: (d, n) = {left:?} vs {right:?}")]
    ShapeMismatch { left: (usize, usize), right: (usize, usize) },
    #[error("points {0} and {1} of the family coincide identically")]
    NotGenericallyDistinct(usize, usize),
    #[error("bad label set: {0}")]
    BadLabels(String),
    #[error("multidegree {0:?} is not (1,1,1)")]
    ClassMismatch(Vec<u8>),
    #[error("operation requires d = 1, got d = {0}")]
    RequiresLineCase(usize),
}

impl Error {
    /// Short variant name, used by the command-line front end.
    pub fn name(&self) -> &'static str {
        match self {
            Error::Parse(_) => "MalformedInput",
            Error::ZeroDirection => "ZeroDirection",
            Error::ValuationTooLow { .. } => "ValuationTooLow",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::NotFullDimensional => "NotFullDimensional",
            Error::UnknownVertex(_) => "UnknownVertex",
            Error::NotAncestor(..) => "NotAncestor",
            Error::InvalidShape(_) => "InvalidShape",
            Error::InvalidTree(_) => "InvalidTree",
            Error::ContractionDegenerate(_) => "ContractionDegenerate",
            Error::GenericityFailure(_) => "GenericityFailure",
            Error::ShapeMismatch { .. } => "ShapeMismatch",
            Error::NotGenericallyDistinct(..) => "NotGenericallyDistinct",
            Error::BadLabels(_) => "BadLabels",
            Error::ClassMismatch(_) => "ClassMismatch",
            Error::RequiresLineCase(_) => "RequiresLineCase",
        }
    }
}
