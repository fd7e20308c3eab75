use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised while constructing or querying tensors and interval tensors.
///
/// Positions are reported as 1-based multi-indices, matching the report format.
#[derive(Debug, Error)]
pub enum Error {
    #[error("order must be at least 2, got {0}")]
    InvalidOrder(usize),

    #[error("dimension must be at least 1, got {0}")]
    InvalidDim(usize),

    #[error("tensor of order {order} and dimension {dim} is too large to store")]
    TooLarge { order: usize, dim: usize },

    #[error("expected {expected} entries, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("non-finite entry {value} at {position}")]
    NonFinite { position: String, value: f64 },

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("multi-index has {got} components, expected {expected}")]
    IndexArity { expected: usize, got: usize },

    #[error("shape mismatch: ({0}) vs ({1})")]
    ShapeMismatch(String, String),

    #[error("lower bound {lower} exceeds upper bound {upper} at {position}")]
    InvertedBounds {
        position: String,
        lower: f64,
        upper: f64,
    },

    #[error("radius entry {value} at {position} is negative")]
    NegativeRadius { position: String, value: f64 },

    #[error("sign vector component {index} is {value}, expected -1 or +1")]
    InvalidSign { index: usize, value: f64 },

    #[error("tail {tail} is the diagonal tail of row {row}")]
    DiagonalTail { row: usize, tail: String },

    #[error("{0}")]
    InvalidArgument(String),

    #[error("tensor is not circulant")]
    NotCirculant,

    #[error("interval tensor is not an interval Z tensor")]
    NotIntervalZ,

    #[error("vertex enumeration needs 2^{free_positions} vertices, budget is {limit}")]
    BudgetExceeded { free_positions: usize, limit: u64 },

    #[error("malformed input: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
