use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty polynomial")]
    EmptyInput,

    #[error("malformed polynomial at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("leading coefficient is zero")]
    ZeroLeading,

    #[error("polynomial must have degree at least 1")]
    DegreeTooLow,

    #[error("shift factor beta must be non-zero")]
    ZeroBeta,

    #[error("matrix is already shifted by alpha={alpha}, beta={beta}")]
    DoubleShift { alpha: i64, beta: i64 },

    #[error("initial vector must be non-zero")]
    ZeroSeed,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("word of length {len} would exceed the cap of {cap} letters")]
    WordCapExceeded { len: u128, cap: usize },

    #[error("unknown glyph at byte {pos} of {word:?}")]
    UnknownGlyph { word: String, pos: usize },

    #[error("root solver did not converge after {sweeps} sweeps (max residual {residual:e})")]
    OracleNonConvergence { sweeps: usize, residual: f64 },

    #[error("construction needs a non-zero red count; run more iterations")]
    NoRedSegments,

    #[error("angle must lie strictly between 0 and 180 degrees, got {0}")]
    BadAngle(f64),

    #[error("unit length must be positive")]
    BadUnit,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
