//! Polar-code codec and simulation toolkit built around a CRC-aided
//! successive-cancellation list (CA-SCL) decoder.
//!
//! The crate covers the full path from code construction to Monte Carlo
//! error-rate measurement:
//!
//! * [`code`] — frozen-set construction, the `O(N log N)` butterfly encoder,
//!   and data-word assembly (payload + CRC into the unfrozen positions).
//! * [`channel`] — BPSK/AWGN transmission, log-likelihood message (LLM)
//!   formation, channel-message compression, and t-bit quantization.
//! * [`kernel`] — the log-domain F/G message kernels in exact, max-approximated
//!   and unsigned fixed-point arithmetic.
//! * [`decoder`] — the SC/SCL/CA-SCL decoding engine with lazy path copying.
//! * [`prune`] — top-L-of-2L path pruning: a sort oracle and a behavioral
//!   bitonic maximum-values-filter network with comparator accounting.
//! * [`crc`] — serial-LFSR checksum generation and the direct / metric-based /
//!   ideal final-candidate selection schemes.
//! * [`hw`] — closed-form hardware analytics: per-PU bit-width profiling,
//!   cycle/throughput/latency, memory planning, and the direct-selection
//!   FER-degradation bound.
//! * [`sim`] — reproducible frame-error-rate sweeps with CSV output.

pub mod channel;
pub mod code;
pub mod crc;
pub mod decoder;
pub mod golden;
pub mod hw;
pub mod kernel;
pub mod prune;
pub mod sim;

mod error;

pub use channel::{CompressedChannelMsg, FixedLlmPair, LlmPair};
pub use code::PolarCode;
pub use crc::{CrcSpec, SelectionScheme};
pub use decoder::{decode_scl, Candidate, ChannelMessages, DecoderConfig};
pub use error::Error;
pub use hw::HwConfig;
pub use kernel::ArithmeticMode;
pub use prune::MetricEntry;
pub use sim::{ExperimentSpec, FerRecord};

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;
