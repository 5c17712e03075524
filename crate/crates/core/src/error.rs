use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix dimension {0} is not a power of two >= 2")]
    InvalidDimension(usize),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("operator is not unitary")]
    NonUnitary,

    #[error("operator is not permutative: input column {column} has {outcomes} non-zero outcomes")]
    NotPermutative { column: usize, outcomes: usize },

    #[error("invalid fault `{fault}`: {reason}")]
    InvalidFault { fault: String, reason: String },

    #[error("fault model configuration enables no fault kind")]
    EmptyFaultModel,

    #[error("fault `{0}` does not give a deterministic outcome on every input")]
    NonDeterministicColumn(String),

    #[error("unsupported output format `{0}`")]
    UnsupportedFormat(String),

    #[error("fault class `{0}` is not detected by any test")]
    UncoverableColumn(String),

    #[error("exhaustive cover search limited to {limit} rows, table has {rows}")]
    InstanceTooLarge { rows: usize, limit: usize },

    #[error("threshold {0} outside the permitted range")]
    InvalidThreshold(f64),

    #[error("detection probability {0} admits no finite repetition count")]
    UnreachableCoverage(f64),

    #[error("test input {0} is not a row of the table")]
    UnknownInput(String),

    #[error("invalid bitstring `{0}`")]
    InvalidBitstring(String),
}

pub type Result<T> = std::result::Result<T, Error>;
