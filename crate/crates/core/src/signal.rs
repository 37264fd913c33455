use crate::error::{Error, Result};

/// A single complex-baseband sample, I in the real part and Q in the
/// imaginary part.
pub type ComplexSample = num_complex::Complex64;

fn check_finite(samples: &[ComplexSample]) -> Result<()> {
    for (i, s) in samples.iter().enumerate() {
        if !s.re.is_finite() || !s.im.is_finite() {
            return Err(Error::NonFinite(i));
        }
    }
    Ok(())
}

fn check_rate(rate_hz: f64) -> Result<()> {
    if !(rate_hz.is_finite() && rate_hz > 0.0) {
        return Err(Error::InvalidRate(rate_hz));
    }
    Ok(())
}

fn mean_power(samples: &[ComplexSample]) -> f64 {
    let sum: f64 = samples.iter().map(|s| s.norm_sqr()).sum();
    sum / samples.len() as f64
}

/// A sample-rate signal: at least one finite complex sample plus the rate it
/// was taken at. Both invariants are checked at construction so downstream
/// operations never see an empty or non-finite buffer.
#[derive(Debug, Clone, PartialEq)]
pub struct Waveform {
    samples: Vec<ComplexSample>,
    sample_rate_hz: f64,
}

impl Waveform {
    pub fn new(samples: Vec<ComplexSample>, sample_rate_hz: f64) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptyWaveform);
        }
        check_finite(&samples)?;
        check_rate(sample_rate_hz)?;
        Ok(Waveform {
            samples,
            sample_rate_hz,
        })
    }

    pub fn samples(&self) -> &[ComplexSample] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<ComplexSample> {
        self.samples
    }

    pub fn sample_rate_hz(&self) -> f64 {
        self.sample_rate_hz
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    /// Always false; kept so `len` has the conventional companion.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Mean of |x[n]|^2 over all samples.
    pub fn power(&self) -> f64 {
        mean_power(&self.samples)
    }
}

/// A symbol-rate signal: complex decision-space points plus the symbol rate.
/// Same invariants as [`Waveform`].
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolFrame {
    symbols: Vec<ComplexSample>,
    symbol_rate_hz: f64,
}

impl SymbolFrame {
    pub fn new(symbols: Vec<ComplexSample>, symbol_rate_hz: f64) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::EmptySymbolFrame);
        }
        check_finite(&symbols)?;
        check_rate(symbol_rate_hz)?;
        Ok(SymbolFrame {
            symbols,
            symbol_rate_hz,
        })
    }

    pub fn symbols(&self) -> &[ComplexSample] {
        &self.symbols
    }

    pub fn into_symbols(self) -> Vec<ComplexSample> {
        self.symbols
    }

    pub fn symbol_rate_hz(&self) -> f64 {
        self.symbol_rate_hz
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Mean of |x[k]|^2 over all symbols.
    pub fn power(&self) -> f64 {
        mean_power(&self.symbols)
    }
}
