use thiserror::Error;

/// Errors reported by simulation blocks when inputs violate their domain.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("waveform must contain at least one sample")]
    EmptyWaveform,

    #[error("symbol frame must contain at least one symbol")]
    EmptySymbolFrame,

    #[error("rate must be positive and finite, got {0}")]
    InvalidRate(f64),

    #[error("non-finite value at index {0}")]
    NonFinite(usize),

    #[error("{0}")]
    InvalidParameter(String),

    #[error("bit count {len} is not a multiple of {bits_per_symbol} bits per symbol")]
    BitCount { len: usize, bits_per_symbol: usize },

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("sample rate mismatch: {a} Hz vs {b} Hz")]
    RateMismatch { a: f64, b: f64 },

    #[error("offset {offset} out of range for {len} samples")]
    OffsetOutOfRange { offset: usize, len: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Shorthand for parameter-validation failures with a formatted message.
    pub fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
