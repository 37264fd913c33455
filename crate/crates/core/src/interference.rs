//! Co-channel and adjacent-channel interferers: independent PSK transmitters
//! whose shaped waveforms are frequency-shifted, scaled to a
//! carrier-to-interference ratio, and added onto the desired signal.

use std::f64::consts::TAU;

use rand::Rng;

use crate::error::{Error, Result};
use crate::modem::{map_bits, PskConfig};
use crate::pulse::{design_rrc, fir_filter, upsample, RrcSpec};
use crate::seed::SeedSpec;
use crate::signal::{ComplexSample, Waveform};
use crate::units::db_to_linear;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InterfererKind {
    CoChannel,
    AdjacentChannel,
}

/// One interfering transmitter. `cir_db` is the carrier-to-interference
/// ratio of a unit-power desired signal over this interferer
/// (+infinity disables it); co-channel interferers sit at zero frequency
/// offset, adjacent-channel ones at a nonzero offset.
#[derive(Debug, Clone, PartialEq)]
pub struct InterfererSpec {
    kind: InterfererKind,
    cir_db: f64,
    freq_offset_hz: f64,
    modulation: PskConfig,
    pulse: RrcSpec,
    seed: SeedSpec,
}

impl InterfererSpec {
    pub fn new(
        kind: InterfererKind,
        cir_db: f64,
        freq_offset_hz: f64,
        modulation: PskConfig,
        pulse: RrcSpec,
        seed: SeedSpec,
    ) -> Result<Self> {
        if cir_db.is_nan() || cir_db == f64::NEG_INFINITY {
            return Err(Error::param("C/I must be a real value or +infinity"));
        }
        if !freq_offset_hz.is_finite() {
            return Err(Error::param("frequency offset must be finite"));
        }
        match kind {
            InterfererKind::CoChannel if freq_offset_hz != 0.0 => {
                return Err(Error::param(
                    "co-channel interferer must have zero frequency offset",
                ));
            }
            InterfererKind::AdjacentChannel if freq_offset_hz == 0.0 => {
                return Err(Error::param(
                    "adjacent-channel interferer needs a nonzero frequency offset",
                ));
            }
            _ => {}
        }
        Ok(InterfererSpec {
            kind,
            cir_db,
            freq_offset_hz,
            modulation,
            pulse,
            seed,
        })
    }

    pub fn kind(&self) -> InterfererKind {
        self.kind
    }

    pub fn cir_db(&self) -> f64 {
        self.cir_db
    }

    pub fn freq_offset_hz(&self) -> f64 {
        self.freq_offset_hz
    }

    pub fn modulation(&self) -> &PskConfig {
        &self.modulation
    }

    pub fn pulse(&self) -> &RrcSpec {
        &self.pulse
    }

    pub fn seed(&self) -> SeedSpec {
        self.seed
    }
}

/// Synthesize `n` samples of the interferer at the working sample rate.
///
/// The interferer runs its own random bits through the same
/// modulate/upsample/shape chain as a transmitter, gets mixed to its
/// frequency offset, and is scaled so its measured power over these `n`
/// samples equals 10^(-cir_db/10), i.e. the requested ratio below a
/// unit-power desired signal.
pub fn gen_interferer(spec: &InterfererSpec, n: usize, sample_rate_hz: f64) -> Result<Waveform> {
    if n == 0 {
        return Err(Error::param("interferer length must be at least 1"));
    }
    if !(sample_rate_hz.is_finite() && sample_rate_hz > 0.0) {
        return Err(Error::InvalidRate(sample_rate_hz));
    }
    if spec.cir_db == f64::INFINITY {
        let zeros = vec![ComplexSample::new(0.0, 0.0); n];
        return Waveform::new(zeros, sample_rate_hz);
    }
    let sps = spec.pulse.samples_per_symbol();
    let symbol_rate = sample_rate_hz / sps as f64;
    let num_symbols = n.div_ceil(sps) + spec.pulse.span_symbols();
    let bps = spec.modulation.bits_per_symbol();
    let mut rng = spec.seed.rng();
    let bits: Vec<bool> = (0..num_symbols * bps).map(|_| rng.random()).collect();
    let frame = map_bits(&bits, &spec.modulation, symbol_rate)?;
    let shaped = fir_filter(
        &upsample(&frame, sps)?,
        &design_rrc(&spec.pulse),
    );
    let mut samples: Vec<ComplexSample> = shaped.samples()[..n].to_vec();
    if spec.freq_offset_hz != 0.0 {
        let step = TAU * spec.freq_offset_hz / sample_rate_hz;
        for (t, s) in samples.iter_mut().enumerate() {
            *s *= ComplexSample::from_polar(1.0, step * t as f64);
        }
    }
    let power = samples.iter().map(|s| s.norm_sqr()).sum::<f64>() / n as f64;
    let target = db_to_linear(-spec.cir_db);
    if power > 0.0 {
        let scale = (target / power).sqrt();
        for s in &mut samples {
            *s *= scale;
        }
    }
    Waveform::new(samples, sample_rate_hz)
}

/// Add the interferers onto the signal, in list order.
pub fn combine(signal: &Waveform, interferers: &[Waveform]) -> Result<Waveform> {
    let mut out = signal.samples().to_vec();
    for intf in interferers {
        if intf.len() != signal.len() {
            return Err(Error::LengthMismatch {
                expected: signal.len(),
                actual: intf.len(),
            });
        }
        if intf.sample_rate_hz() != signal.sample_rate_hz() {
            return Err(Error::RateMismatch {
                a: signal.sample_rate_hz(),
                b: intf.sample_rate_hz(),
            });
        }
        for (o, s) in out.iter_mut().zip(intf.samples()) {
            *o += s;
        }
    }
    Waveform::new(out, signal.sample_rate_hz())
}
