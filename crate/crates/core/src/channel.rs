//! Channel impairments: additive white Gaussian noise calibrated to a
//! requested symbol-energy-to-noise-density ratio, and multipath Rayleigh
//! fading built from a seeded sum-of-sinusoids Doppler process.

use std::f64::consts::TAU;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::seed::SeedSpec;
use crate::signal::{ComplexSample, Waveform};
use crate::units::db_to_linear;

/// Noise injection parameters. `esn0_db` may be `f64::INFINITY` to disable
/// noise entirely; `samples_per_symbol` relates per-sample noise power to
/// the symbol-domain ratio the receiver sees after matched filtering.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AwgnConfig {
    pub esn0_db: f64,
    pub samples_per_symbol: usize,
    pub seed: SeedSpec,
}

impl AwgnConfig {
    pub fn new(esn0_db: f64, samples_per_symbol: usize, seed: SeedSpec) -> Result<Self> {
        if esn0_db.is_nan() || esn0_db == f64::NEG_INFINITY {
            return Err(Error::param("Es/N0 must be a real value or +infinity"));
        }
        if samples_per_symbol < 1 {
            return Err(Error::param("samples per symbol must be at least 1"));
        }
        Ok(AwgnConfig {
            esn0_db,
            samples_per_symbol,
            seed,
        })
    }
}

/// Add circularly symmetric complex Gaussian noise to `w`.
///
/// The per-sample noise variance is `measured_power(w) * samples_per_symbol
/// / esn0_linear`, split equally between the real and imaginary components.
/// A symbol then carries `samples_per_symbol` times the mean sample energy,
/// so after a unit-energy matched filter (which leaves white-noise variance
/// untouched) the symbol-domain Es/N0 matches the request. Deriving the
/// variance from measured rather than nominal power keeps the calibration
/// independent of filter gain conventions.
pub fn add_awgn(w: &Waveform, cfg: &AwgnConfig) -> Waveform {
    if cfg.esn0_db == f64::INFINITY {
        return w.clone();
    }
    let noise_var = w.power() * cfg.samples_per_symbol as f64 / db_to_linear(cfg.esn0_db);
    let comp_sigma = (noise_var / 2.0).sqrt();
    let mut rng = cfg.seed.rng();
    let samples = w
        .samples()
        .iter()
        .map(|s| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            s + ComplexSample::new(comp_sigma * re, comp_sigma * im)
        })
        .collect();
    Waveform::new(samples, w.sample_rate_hz()).expect("noise addition preserves invariants")
}

/// One propagation path: a whole-sample delay at the working rate and an
/// average gain in dB.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathSpec {
    pub delay_samples: usize,
    pub avg_gain_db: f64,
}

/// Parameters of the Rayleigh fading generator.
#[derive(Debug, Clone, PartialEq)]
pub struct FadingConfig {
    pub paths: Vec<PathSpec>,
    pub doppler_hz: f64,
    pub sample_rate_hz: f64,
    /// When set, path gains are rescaled so their linear sum is one and the
    /// channel neither amplifies nor attenuates on average.
    pub normalize_total_power: bool,
    /// Sinusoids per quadrature component; at least 8, default 32.
    pub num_oscillators: usize,
    pub seed: SeedSpec,
}

pub const DEFAULT_NUM_OSCILLATORS: usize = 32;

impl FadingConfig {
    /// Single zero-delay unit-gain path: the flat-fading channel.
    pub fn flat(doppler_hz: f64, sample_rate_hz: f64, seed: SeedSpec) -> Self {
        FadingConfig {
            paths: vec![PathSpec {
                delay_samples: 0,
                avg_gain_db: 0.0,
            }],
            doppler_hz,
            sample_rate_hz,
            normalize_total_power: true,
            num_oscillators: DEFAULT_NUM_OSCILLATORS,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.paths.is_empty() {
            return Err(Error::param("at least one propagation path is required"));
        }
        if self.paths[0].delay_samples != 0 {
            return Err(Error::param("first path delay must be 0 samples"));
        }
        for pair in self.paths.windows(2) {
            if pair[1].delay_samples <= pair[0].delay_samples {
                return Err(Error::param("path delays must be strictly increasing"));
            }
        }
        if !(self.doppler_hz.is_finite() && self.doppler_hz > 0.0) {
            return Err(Error::param("Doppler frequency must be positive"));
        }
        if !(self.sample_rate_hz.is_finite() && self.sample_rate_hz > 0.0) {
            return Err(Error::InvalidRate(self.sample_rate_hz));
        }
        if self.doppler_hz >= self.sample_rate_hz / 10.0 {
            return Err(Error::param(format!(
                "Doppler {} Hz too fast for sample rate {} Hz (must stay below 1/10)",
                self.doppler_hz, self.sample_rate_hz
            )));
        }
        if self.num_oscillators < 8 {
            return Err(Error::param(format!(
                "need at least 8 oscillators per quadrature, got {}",
                self.num_oscillators
            )));
        }
        Ok(())
    }
}

/// Realized complex path gains on a sample grid, ready to drive a
/// tapped-delay-line channel.
#[derive(Debug, Clone, PartialEq)]
pub struct FadingProcess {
    paths: Vec<(usize, Vec<ComplexSample>)>,
}

impl FadingProcess {
    pub fn len(&self) -> usize {
        self.paths[0].1.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn num_paths(&self) -> usize {
        self.paths.len()
    }

    pub fn path_delay(&self, p: usize) -> usize {
        self.paths[p].0
    }

    pub fn path_gains(&self, p: usize) -> &[ComplexSample] {
        &self.paths[p].1
    }
}

/// One quadrature component: a sum of `freqs.len()` equal-amplitude
/// sinusoids evaluated by phasor recurrence, scaled to variance 1/2.
fn sum_of_sinusoids(freqs: &[f64], phases: &[f64], fs: f64, n: usize) -> Vec<f64> {
    let mut acc = vec![0.0f64; n];
    for (&f, &phi) in freqs.iter().zip(phases) {
        let step = ComplexSample::from_polar(1.0, TAU * f / fs);
        let mut z = ComplexSample::from_polar(1.0, phi);
        for a in acc.iter_mut() {
            *a += z.re;
            z *= step;
        }
    }
    let scale = 1.0 / (freqs.len() as f64).sqrt();
    for a in &mut acc {
        *a *= scale;
    }
    acc
}

/// Generate `n` samples of the fading process for every path.
///
/// Each quadrature of each path is an independent sum of sinusoids at
/// Doppler frequencies fd*cos(angle), the angles equally spaced around the
/// circle with a seed-drawn rotation and the phases drawn independently.
/// That construction has the classical U-shaped Doppler spectrum limited to
/// |f| <= fd and a J0-shaped autocorrelation. Every path realization is
/// rescaled so its time-average power equals the path's linear gain
/// exactly, which pins the channel's power calibration regardless of how
/// slowly the Doppler process mixes over the window.
pub fn make_fading(cfg: &FadingConfig, n: usize) -> Result<FadingProcess> {
    cfg.validate()?;
    if n == 0 {
        return Err(Error::param("fading process needs at least 1 sample"));
    }
    let total: f64 = cfg
        .paths
        .iter()
        .map(|p| db_to_linear(p.avg_gain_db))
        .sum();
    let mut rng = cfg.seed.rng();
    let nos = cfg.num_oscillators;
    let mut paths = Vec::with_capacity(cfg.paths.len());
    for spec in &cfg.paths {
        let mut target = db_to_linear(spec.avg_gain_db);
        if cfg.normalize_total_power {
            target /= total;
        }
        let quad = |rng: &mut rand_chacha::ChaCha8Rng| {
            let rotation = rng.random::<f64>() * TAU;
            let freqs: Vec<f64> = (0..nos)
                .map(|i| {
                    let angle = TAU * (i as f64 + 0.5) / nos as f64 + rotation;
                    cfg.doppler_hz * angle.cos()
                })
                .collect();
            let phases: Vec<f64> = (0..nos).map(|_| rng.random::<f64>() * TAU).collect();
            sum_of_sinusoids(&freqs, &phases, cfg.sample_rate_hz, n)
        };
        let i_part = quad(&mut rng);
        let q_part = quad(&mut rng);
        let mut gains: Vec<ComplexSample> = i_part
            .into_iter()
            .zip(q_part)
            .map(|(i, q)| ComplexSample::new(i, q))
            .collect();
        let realized = gains.iter().map(|g| g.norm_sqr()).sum::<f64>() / n as f64;
        if realized > 0.0 {
            let scale = (target / realized).sqrt();
            for g in &mut gains {
                *g *= scale;
            }
        }
        paths.push((spec.delay_samples, gains));
    }
    Ok(FadingProcess { paths })
}

/// Drive the waveform through the tapped delay line:
/// out[n] = sum over paths of c_p[n] * w[n - delay_p], with samples before
/// the start of the waveform treated as zero.
pub fn apply_fading(w: &Waveform, f: &FadingProcess) -> Result<Waveform> {
    if f.len() < w.len() {
        return Err(Error::LengthMismatch {
            expected: w.len(),
            actual: f.len(),
        });
    }
    let x = w.samples();
    let mut out = vec![ComplexSample::new(0.0, 0.0); x.len()];
    for (delay, gains) in &f.paths {
        for n in *delay..x.len() {
            out[n] += gains[n] * x[n - delay];
        }
    }
    Ok(Waveform::new(out, w.sample_rate_hz()).expect("fading preserves waveform invariants"))
}
