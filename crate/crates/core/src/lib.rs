//! Complex-baseband building blocks for link-level simulation of M-PSK
//! transmission over additive-noise and multipath fading channels.
//!
//! The crate is organized as a set of small, composable operations that all
//! speak the same sample types ([`Waveform`] at the sample rate,
//! [`SymbolFrame`] at the symbol rate). A typical transmit/receive chain:
//!
//! ```text
//! bits -> map_bits -> upsample -> fir_filter (shaping)
//!      -> gen_interferer/combine -> add_awgn / apply_fading
//!      -> fir_filter (matched) -> downsample -> [lms_run] -> demap_symbols -> bits
//! ```
//!
//! Every stochastic operation takes an explicit [`SeedSpec`] so that whole
//! experiments replay bit-for-bit from a single master seed.

pub mod channel;
pub mod equalizer;
mod error;
pub mod interference;
pub mod metrics;
pub mod modem;
pub mod pulse;
mod seed;
mod signal;
pub mod units;

pub use error::{Error, Result};
pub use seed::SeedSpec;
pub use signal::{ComplexSample, SymbolFrame, Waveform};
