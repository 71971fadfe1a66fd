use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid space: {0}")]
    InvalidSpace(String),

    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),

    #[error("rank {rank} out of range for dimension {dimension}")]
    RankOutOfRange { rank: u64, dimension: u64 },

    #[error("integer overflow computing {0}")]
    Overflow(String),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("FCIDUMP line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{what} of {requested} exceeds cap {cap}")]
    CapExceeded {
        what: &'static str,
        requested: u64,
        cap: u64,
    },

    #[error("configurations belong to different spaces: {0}")]
    SpaceMismatch(String),

    #[error("edge ({x}, {y}) has excitation degree {degree}; expected 1 or 2")]
    NotAnEdge { x: u64, y: u64, degree: u32 },

    #[error("improper coloring at node {node}: color {color} reaches both {first} and {second}")]
    ImproperColoring {
        node: u64,
        color: String,
        first: u64,
        second: u64,
    },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("unsupported Trotter order {0}; use 1 or an even order")]
    UnsupportedOrder(u32),

    #[error("Suzuki level must be at least 2, got {0}")]
    InvalidLevel(u32),

    #[error("numerical check failed: {0}")]
    Numerical(String),

    #[error("state file line {line}: {message}")]
    StateFormat { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
