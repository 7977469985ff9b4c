use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("size mismatch: expected {expected}, got {got}")]
    SizeMismatch { expected: usize, got: usize },

    #[error("index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("empty index set")]
    EmptySet,

    #[error("partition {0} is not non-crossing")]
    NotNonCrossing(String),

    #[error("partition {partition} is not bi-non-crossing for chi={chi}")]
    NotBiNonCrossing { partition: String, chi: String },

    #[error("size {n} exceeds the enumeration limit {limit}")]
    LimitExceeded { n: usize, limit: usize },

    #[error("word of length {len} exceeds degree bound {bound}")]
    DegreeExceeded { len: usize, bound: usize },

    #[error("letter {0} does not belong to this model's alphabet")]
    ForeignLetter(String),

    #[error("no table entry for word '{0}'")]
    MissingEntry(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("duplicate pair id {0}")]
    DuplicatePair(u32),

    #[error("unknown check id '{0}'")]
    UnknownCheck(String),

    #[error("cross-check failed: {0}")]
    Inconsistent(String),

    #[error("model file: {0}")]
    Model(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
