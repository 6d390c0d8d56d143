use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid vector: {0}")]
    InvalidVector(String),

    #[error("invalid codebook: {0}")]
    InvalidCodebook(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("training failed: {0}")]
    Training(String),

    #[error("search space of {n} exceeds statevector cap {cap}")]
    StatevectorTooLarge { n: usize, cap: usize },

    #[error("neighborhood table built for delta_hat={table} but encoder configured with {config}")]
    DeltaHatMismatch { table: f64, config: f64 },

    #[error("malformed PGM: {0}")]
    Pgm(String),

    #[error("malformed index stream: {0}")]
    IndexStream(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] io::Error),
}
