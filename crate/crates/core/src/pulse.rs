//! Root-raised-cosine pulse shaping and the rate-change operations around
//! it. The same filter is used at the transmitter and as the receive matched
//! filter; cascading the two gives a raised-cosine response that is free of
//! intersymbol interference at the symbol instants.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::signal::{ComplexSample, SymbolFrame, Waveform};

/// Design parameters for a root-raised-cosine filter.
///
/// `span_symbols` is the total length of the impulse response in symbol
/// periods; it must be even so the single-sided delay is a whole number of
/// symbols. `samples_per_symbol` is the oversampling factor of the waveform
/// the filter runs at.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RrcSpec {
    rolloff: f64,
    span_symbols: usize,
    samples_per_symbol: usize,
}

impl RrcSpec {
    pub fn new(rolloff: f64, span_symbols: usize, samples_per_symbol: usize) -> Result<Self> {
        if !(rolloff.is_finite() && rolloff > 0.0 && rolloff <= 1.0) {
            return Err(Error::param("rolloff must be in (0,1]"));
        }
        if span_symbols == 0 || span_symbols % 2 != 0 {
            return Err(Error::param(format!(
                "filter span must be a positive even number of symbols, got {span_symbols}"
            )));
        }
        if samples_per_symbol < 2 {
            return Err(Error::param(format!(
                "samples per symbol must be at least 2, got {samples_per_symbol}"
            )));
        }
        Ok(RrcSpec {
            rolloff,
            span_symbols,
            samples_per_symbol,
        })
    }

    pub fn rolloff(&self) -> f64 {
        self.rolloff
    }

    pub fn span_symbols(&self) -> usize {
        self.span_symbols
    }

    pub fn samples_per_symbol(&self) -> usize {
        self.samples_per_symbol
    }

    pub fn num_taps(&self) -> usize {
        self.span_symbols * self.samples_per_symbol + 1
    }
}

/// Real, symmetric, unit-energy FIR coefficients with an odd tap count.
/// The invariants are enforced at construction: symmetry within 1e-12,
/// energy within 1e-9 of one. Passband gain is the plain coefficient sum.
#[derive(Debug, Clone, PartialEq)]
pub struct FirTaps {
    coefficients: Vec<f64>,
}

impl FirTaps {
    pub fn new(coefficients: Vec<f64>) -> Result<Self> {
        if coefficients.is_empty() || coefficients.len() % 2 == 0 {
            return Err(Error::param(format!(
                "tap count must be odd, got {}",
                coefficients.len()
            )));
        }
        for (i, c) in coefficients.iter().enumerate() {
            if !c.is_finite() {
                return Err(Error::NonFinite(i));
            }
        }
        let n = coefficients.len();
        for i in 0..n / 2 {
            if (coefficients[i] - coefficients[n - 1 - i]).abs() > 1e-12 {
                return Err(Error::param(format!(
                    "taps must be symmetric: index {i} vs {}",
                    n - 1 - i
                )));
            }
        }
        let energy: f64 = coefficients.iter().map(|c| c * c).sum();
        if (energy - 1.0).abs() > 1e-9 {
            return Err(Error::param(format!(
                "taps must have unit energy, got {energy}"
            )));
        }
        Ok(FirTaps { coefficients })
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Delay of the symmetric filter in samples: (tap count - 1) / 2.
    pub fn group_delay_samples(&self) -> usize {
        (self.coefficients.len() - 1) / 2
    }
}

/// Closed-form root-raised-cosine impulse response on the grid
/// t = n / sps symbol periods, n in [-span*sps/2, span*sps/2], without
/// energy normalization. The two removable singularities (t = 0 and
/// 4*beta*|t| = 1) use their limit expressions.
fn rrc_impulse(spec: &RrcSpec) -> Vec<f64> {
    let beta = spec.rolloff;
    let sps = spec.samples_per_symbol as f64;
    let half = (spec.span_symbols * spec.samples_per_symbol / 2) as i64;
    (-half..=half)
        .map(|n| {
            let t = n as f64 / sps;
            if t == 0.0 {
                1.0 - beta + 4.0 * beta / PI
            } else if ((4.0 * beta * t).abs() - 1.0).abs() < 1e-9 {
                let x = PI / (4.0 * beta);
                (beta / 2f64.sqrt())
                    * ((1.0 + 2.0 / PI) * x.sin() + (1.0 - 2.0 / PI) * x.cos())
            } else {
                let num = (PI * t * (1.0 - beta)).sin()
                    + 4.0 * beta * t * (PI * t * (1.0 + beta)).cos();
                let den = PI * t * (1.0 - (4.0 * beta * t).powi(2));
                num / den
            }
        })
        .collect()
}

/// Design a root-raised-cosine filter and normalize it to unit energy.
pub fn design_rrc(spec: &RrcSpec) -> FirTaps {
    let mut taps = rrc_impulse(spec);
    let energy: f64 = taps.iter().map(|c| c * c).sum();
    let scale = energy.sqrt().recip();
    for c in &mut taps {
        *c *= scale;
    }
    FirTaps::new(taps).expect("designed taps satisfy the filter invariants")
}

/// Insert `l - 1` zeros after every symbol, producing a waveform at `l`
/// times the symbol rate. Mean power drops by the factor `l`.
pub fn upsample(frame: &SymbolFrame, l: usize) -> Result<Waveform> {
    if l == 0 {
        return Err(Error::param("upsampling factor must be at least 1"));
    }
    let mut samples = vec![ComplexSample::new(0.0, 0.0); frame.len() * l];
    for (k, &sym) in frame.symbols().iter().enumerate() {
        samples[k * l] = sym;
    }
    Waveform::new(samples, frame.symbol_rate_hz() * l as f64)
}

/// Causal same-length convolution: out[n] = sum_k taps[k] * w[n - k].
/// The output keeps the input length and rate, so the filter's group delay
/// stays in the data instead of being trimmed away.
pub fn fir_filter(w: &Waveform, taps: &FirTaps) -> Waveform {
    let x = w.samples();
    let h = taps.coefficients();
    let k = h.len();
    // Reversed copy lets every output sample be a forward dot product over a
    // contiguous window, which the optimizer vectorizes.
    let h_rev: Vec<f64> = h.iter().rev().copied().collect();
    let mut y = Vec::with_capacity(x.len());
    for n in 0..x.len() {
        let (hw, xw) = if n + 1 >= k {
            (&h_rev[..], &x[n + 1 - k..=n])
        } else {
            (&h_rev[k - 1 - n..], &x[..=n])
        };
        let mut re = 0.0;
        let mut im = 0.0;
        for (c, s) in hw.iter().zip(xw) {
            re += c * s.re;
            im += c * s.im;
        }
        y.push(ComplexSample::new(re, im));
    }
    Waveform::new(y, w.sample_rate_hz()).expect("filtering preserves waveform invariants")
}

/// Keep every `l`-th sample starting at `offset`, producing a frame at
/// sample_rate / l. `offset` selects the decision instant and normally
/// equals the accumulated group delay of the filters in the chain.
pub fn downsample(w: &Waveform, l: usize, offset: usize) -> Result<SymbolFrame> {
    if l == 0 {
        return Err(Error::param("downsampling factor must be at least 1"));
    }
    if offset >= w.len() {
        return Err(Error::OffsetOutOfRange {
            offset,
            len: w.len(),
        });
    }
    let symbols: Vec<ComplexSample> = w.samples()[offset..].iter().step_by(l).copied().collect();
    SymbolFrame::new(symbols, w.sample_rate_hz() / l as f64)
}
