use thiserror::Error;

/// Errors reported by the codec, decoder and simulation layers.
#[derive(Debug, Error)]
pub enum Error {
    /// A constructor or operation was called with an argument outside its
    /// documented domain.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An input sequence had the wrong number of elements.
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    /// A data word placed a nonzero bit on a frozen position.
    #[error("nonzero bit at frozen position {0}")]
    NonzeroFrozenBit(usize),

    /// Channel-message compression requires one entry of the pair to be zero.
    #[error("cannot compress pair ({v0}, {v1}): neither entry is zero")]
    Uncompressible { v0: u32, v1: u32 },

    /// The ideal selection scheme needs the transmitted data word.
    #[error("ideal selection requires the transmitted data word")]
    IdealSelectionNeedsTransmitted,

    /// Failed to parse a frozen-set file or experiment config.
    #[error("parse error: {0}")]
    Parse(String),

    /// Underlying I/O failure.
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
