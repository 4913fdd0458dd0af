//! Error types shared across the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, EstError>;

/// Errors produced by population construction, estimator evaluation and
/// the validation oracles.
#[derive(Debug, Error)]
pub enum EstError {
    /// A required column is absent or malformed at the schema level.
    #[error("schema error: {0}")]
    Schema(String),

    /// A moment needed as a denominator (mean, variance, second moment)
    /// is zero, so the requested ratio is undefined.
    #[error("degenerate moment: {0}")]
    DegenerateMoment(String),

    /// An attribute proportion is exactly 0 or 1, so its coefficient of
    /// variation is undefined.
    #[error("degenerate proportion: {0}")]
    DegenerateProportion(String),

    /// Sample/population sizes violate the design bounds.
    #[error("design error: {0}")]
    Design(String),

    /// A moment or coefficient required by a formula was not supplied.
    #[error("incomplete input: missing {0}")]
    IncompleteInput(String),

    /// A denominator evaluates to zero for the given inputs.
    #[error("singular input: {0}")]
    SingularInput(String),

    /// The inputs fall outside the mathematical domain of the operation
    /// (e.g. a fractional power of a negative base).
    #[error("domain error: {0}")]
    Domain(String),

    /// The objective is flat or indefinite, so no optimum exists.
    #[error("degenerate optimum: {0}")]
    DegenerateOptimum(String),

    /// The factor-type family denominator A + fB + C vanishes at this α.
    #[error("singular family member at alpha = {alpha}")]
    SingularFamily { alpha: f64 },

    /// The optimality equation has no positive real root; carries every
    /// real root found so the caller can inspect them.
    #[error("no positive real root; real roots found: {roots:?}")]
    NoPositiveRoot { roots: Vec<f64> },

    /// Exact enumeration would visit more samples than the configured cap.
    #[error("enumeration too large: {total} samples exceeds cap {cap}; use Monte Carlo")]
    EnumerationTooLarge { total: u128, cap: u64 },

    /// The design kind cannot be enumerated exactly.
    #[error("enumeration unsupported: {0}")]
    EnumerationUnsupported(String),

    /// A cell failed to parse while reading an input file.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// Unknown built-in dataset or table identifier.
    #[error("unknown identifier: {0}")]
    UnknownId(String),

    /// I/O failure, annotated with the path involved.
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl EstError {
    /// Exit-code class for the command-line tool: 2 validation, 4 I/O.
    pub fn exit_code(&self) -> u8 {
        match self {
            EstError::Io { .. } => 4,
            EstError::Parse { .. } => 4,
            _ => 2,
        }
    }
}
