use thiserror::Error;

/// Errors raised by tuple construction and the exact-arithmetic operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("weights must be a nonempty list of positive integers")]
    InvalidWeights,

    #[error("coordinate tuple must have at least one nonzero entry")]
    ZeroTuple,

    #[error("tuple has {got} coordinates but the weight list has {want}")]
    ArityMismatch { want: usize, got: usize },

    #[error("scalar must be nonzero")]
    ZeroScalar,

    #[error("valuation of zero is undefined")]
    ZeroValuation,

    #[error("radical scaling does not yield rational coordinates")]
    NonRationalResult,

    #[error("points are bound to different weight tuples")]
    WeightsMismatch,

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("degenerate moduli point: coordinate {index} must be nonzero")]
    DegenerateModuli { index: usize },

    #[error("malformed record: {0}")]
    MalformedRecord(String),
}

pub type Result<T> = std::result::Result<T, Error>;
