use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Coarse classification used by front ends to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Malformed input or a violated precondition.
    Input,
    /// The mathematics has no answer within the requested bounds.
    Domain,
    /// An exact identity that must hold did not; indicates a convention bug.
    Internal,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("vectors belong to different lattices")]
    LatticeMismatch,
    #[error("Gram matrix is not square and symmetric")]
    NotSymmetric,
    #[error("lattice is degenerate (nullity {0})")]
    Degenerate(usize),
    #[error("unknown standard lattice `{0}`")]
    UnknownLattice(String),
    #[error("basis rows are linearly dependent")]
    DependentRows,
    #[error("vector has norm {got}, expected {expected}")]
    WrongNorm { expected: i64, got: String },
    #[error("frame is not positive definite")]
    NotPositiveDefinite,
    #[error("frame has {got} vectors but the positive index is {expected}")]
    FrameSize { expected: usize, got: usize },
    #[error("matrix does not preserve the form")]
    NotIsometry,
    #[error("block structure mismatch: {0}")]
    BlockMismatch(String),
    #[error("pairing frames differ")]
    FrameMismatch,
    #[error("threefold frame carries no c2 data")]
    MissingC2,
    #[error("vectors do not form a hyperbolic pair: {0}")]
    NotHyperbolicPair(String),
    #[error("vector is not orthogonal to the polarization or pair: {0}")]
    NotOrthogonal(String),
    #[error("no hyperbolic pair found within coefficient bound {bound}")]
    NoneFound { bound: u32 },
    #[error("determinant is {0}, expected 1")]
    DetNotOne(String),
    #[error("point set is not full-dimensional")]
    NotFullDimensional,
    #[error("origin is not in the interior of the polytope")]
    OriginNotInterior,
    #[error("polytope is not reflexive")]
    NotReflexive,
    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),
    #[error("sublattice is not preserved by the isometry")]
    NotPreserved,
    #[error("result is not integral: {0}")]
    NonIntegral(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::NoneFound { .. }
            | Error::Degenerate(_)
            | Error::NotReflexive
            | Error::OriginNotInterior
            | Error::NotFullDimensional
            | Error::NotPreserved => ErrorKind::Domain,
            Error::NonIntegral(_) => ErrorKind::Internal,
            _ => ErrorKind::Input,
        }
    }
}
