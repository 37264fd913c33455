//! Symbol-spaced linear adaptive equalizer using the complex LMS recursion,
//! with a training phase followed by decision-directed operation.

use crate::error::{Error, Result};
use crate::modem::PskConfig;
use crate::signal::{ComplexSample, SymbolFrame};

/// Settings for one LMS run. `reference_delay_symbols` is the lag between
/// the newest symbol entering the tap window and the training symbol it is
/// compared against; pick roughly the channel delay plus half the tap span.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LmsConfig {
    num_taps: usize,
    step_size: f64,
    training_len: usize,
    reference_delay_symbols: usize,
}

impl LmsConfig {
    /// `num_taps` must be odd; `step_size` must be finite and nonnegative
    /// (zero freezes the taps, useful for applying a fixed equalizer).
    pub fn new(
        num_taps: usize,
        step_size: f64,
        training_len: usize,
        reference_delay_symbols: usize,
    ) -> Result<Self> {
        if num_taps == 0 || num_taps % 2 == 0 {
            return Err(Error::param("equalizer tap count must be odd"));
        }
        if !(step_size.is_finite() && step_size >= 0.0) {
            return Err(Error::param("step size must be finite and nonnegative"));
        }
        Ok(LmsConfig {
            num_taps,
            step_size,
            training_len,
            reference_delay_symbols,
        })
    }

    pub fn num_taps(&self) -> usize {
        self.num_taps
    }

    pub fn step_size(&self) -> f64 {
        self.step_size
    }

    pub fn training_len(&self) -> usize {
        self.training_len
    }

    pub fn reference_delay_symbols(&self) -> usize {
        self.reference_delay_symbols
    }

    /// True when the step size violates the rule-of-thumb stability bound
    /// 2 / (num_taps * input_power). Such runs are permitted but callers
    /// should surface the flag, since the recursion may diverge.
    pub fn exceeds_stability_guideline(&self, input_power: f64) -> bool {
        input_power > 0.0 && self.step_size >= 2.0 / (self.num_taps as f64 * input_power)
    }
}

/// Result of [`lms_run`]: per-symbol equalizer outputs, the taps after the
/// final update, and the squared error magnitude at every symbol.
#[derive(Debug, Clone, PartialEq)]
pub struct LmsOutcome {
    pub equalized: SymbolFrame,
    pub taps: Vec<ComplexSample>,
    pub mse_curve: Vec<f64>,
}

/// Run the complex LMS recursion over a symbol-rate frame.
///
/// At each symbol the output is y[n] = w^H u[n], where u[n] holds the most
/// recent `num_taps` received symbols (newest first, zero-padded before the
/// start). The error e[n] = d[n] - y[n] uses the delayed training symbol
/// while n - reference_delay < training_len, and the hard decision on y[n]
/// afterwards; taps update as w <- w + step_size * conj(e[n]) * u[n].
///
/// Taps start as an impulse at the center, so a zero step size reproduces
/// the input delayed by half the tap span.
pub fn lms_run(
    received: &SymbolFrame,
    training: &SymbolFrame,
    modulation: &PskConfig,
    cfg: &LmsConfig,
) -> Result<LmsOutcome> {
    if training.len() > received.len() {
        return Err(Error::LengthMismatch {
            expected: received.len(),
            actual: training.len(),
        });
    }
    if training.symbol_rate_hz() != received.symbol_rate_hz() {
        return Err(Error::RateMismatch {
            a: received.symbol_rate_hz(),
            b: training.symbol_rate_hz(),
        });
    }
    if cfg.training_len > training.len() {
        return Err(Error::param(
            "training_len exceeds the supplied training sequence",
        ));
    }
    let k = cfg.num_taps;
    let r = received.symbols();
    let d_ref = training.symbols();
    let mut w = vec![ComplexSample::new(0.0, 0.0); k];
    w[k / 2] = ComplexSample::new(1.0, 0.0);
    let mut equalized = Vec::with_capacity(r.len());
    let mut mse_curve = Vec::with_capacity(r.len());
    let mut u = vec![ComplexSample::new(0.0, 0.0); k];
    for n in 0..r.len() {
        for t in (1..k).rev() {
            u[t] = u[t - 1];
        }
        u[0] = r[n];
        let y: ComplexSample = w.iter().zip(&u).map(|(wi, ui)| wi.conj() * ui).sum();
        let d = match n.checked_sub(cfg.reference_delay_symbols) {
            Some(m) if m < cfg.training_len => d_ref[m],
            _ => modulation.point(modulation.hard_decision(y)),
        };
        let e = d - y;
        if cfg.step_size != 0.0 {
            let g = cfg.step_size * e.conj();
            for (wi, ui) in w.iter_mut().zip(&u) {
                *wi += g * ui;
            }
        }
        equalized.push(y);
        mse_curve.push(e.norm_sqr());
    }
    Ok(LmsOutcome {
        equalized: SymbolFrame::new(equalized, received.symbol_rate_hz())?,
        taps: w,
        mse_curve,
    })
}
