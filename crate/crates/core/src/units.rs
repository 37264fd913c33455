//! Decibel conversions used throughout the chain. Power quantities use the
//! 10 log10 convention; amplitude scaling uses 20 log10.

/// Power ratio from decibels: 10^(db/10).
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Decibels from a power ratio: 10 log10(x).
pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// Amplitude ratio from decibels: 10^(db/20).
pub fn db_to_amplitude(db: f64) -> f64 {
    10f64.powf(db / 20.0)
}
