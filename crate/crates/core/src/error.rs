use thiserror::Error;

/// Errors surfaced by the engine.
///
/// Everything here is a contract violation of some operation; internal
/// arithmetic is total and panics only on programmer error (e.g. adding
/// elements of two different groups).
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("exponent {0} is not a positive integer")]
    NonPositiveExponent(u32),

    #[error("first exponent must be at least 2, got {0}")]
    FirstExponentTooSmall(u32),

    #[error("group has rank {0}, expected rank 1")]
    RankError(usize),

    #[error("variable {0} has non-positive weight")]
    NonPositiveWeight(usize),

    #[error("elements belong to groups with different presentations")]
    GroupMismatch,

    #[error("factorizations have different potentials")]
    PotentialMismatch,

    #[error("potentials have different degrees")]
    DegreeMismatch,

    #[error("index {index} out of range {min}..={max}")]
    IndexOutOfRange { index: i64, min: i64, max: i64 },

    #[error("matrix shapes do not match: {0}")]
    ShapeMismatch(String),

    #[error("last exponent must be at least 2 for the weight-product form, got {0}")]
    ExponentTooSmall(u32),

    #[error("quiver contains a cycle")]
    CyclicQuiver,

    #[error("invalid serialized data: {0}")]
    Deserialize(String),
}

pub type Result<T> = std::result::Result<T, Error>;
