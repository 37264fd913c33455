//! Measurement side of the simulator: bit-error accounting with binomial
//! confidence intervals, Welch power-spectral-density estimation,
//! constellation capture for scatter plots, and closed-form BER references
//! for coherent M-PSK.

use std::f64::consts::{PI, SQRT_2, TAU};

use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::signal::{ComplexSample, SymbolFrame, Waveform};
use crate::units::db_to_linear;

/// Outcome of a bit-error measurement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BerReport {
    pub bits_compared: u64,
    pub bit_errors: u64,
    pub ber: f64,
    /// Half-width of the normal-approximation 95% confidence interval,
    /// 1.96 * sqrt(ber * (1 - ber) / bits_compared).
    pub ci95_halfwidth: f64,
}

impl BerReport {
    /// Build a report from raw counters. With zero compared bits the rate
    /// and interval are reported as zero.
    pub fn from_counts(bits_compared: u64, bit_errors: u64) -> Self {
        debug_assert!(bit_errors <= bits_compared);
        let (ber, ci95_halfwidth) = if bits_compared == 0 {
            (0.0, 0.0)
        } else {
            let p = bit_errors as f64 / bits_compared as f64;
            (p, 1.96 * (p * (1.0 - p) / bits_compared as f64).sqrt())
        };
        BerReport {
            bits_compared,
            bit_errors,
            ber,
            ci95_halfwidth,
        }
    }

    /// Merge two independent partial counts into one report.
    pub fn merged(self, other: BerReport) -> BerReport {
        BerReport::from_counts(
            self.bits_compared + other.bits_compared,
            self.bit_errors + other.bit_errors,
        )
    }
}

/// Count bit errors between two equal-length streams, ignoring the first
/// `skip_bits` positions (the filter-transient region of a chain run).
pub fn count_ber(tx_bits: &[bool], rx_bits: &[bool], skip_bits: usize) -> Result<BerReport> {
    if tx_bits.len() != rx_bits.len() {
        return Err(Error::LengthMismatch {
            expected: tx_bits.len(),
            actual: rx_bits.len(),
        });
    }
    if skip_bits >= tx_bits.len() {
        return Err(Error::OffsetOutOfRange {
            offset: skip_bits,
            len: tx_bits.len(),
        });
    }
    let errors = tx_bits[skip_bits..]
        .iter()
        .zip(&rx_bits[skip_bits..])
        .filter(|(a, b)| a != b)
        .count() as u64;
    Ok(BerReport::from_counts(
        (tx_bits.len() - skip_bits) as u64,
        errors,
    ))
}

/// Two-sided spectral density estimate. `density` is absolute (power per
/// Hz, Parseval-consistent); `power_db` is the same data in decibels
/// relative to the peak bin, which is the form the figure exports use.
#[derive(Debug, Clone, PartialEq)]
pub struct PsdEstimate {
    pub freq_hz: Vec<f64>,
    pub power_db: Vec<f64>,
    pub density: Vec<f64>,
    pub bin_width_hz: f64,
}

impl PsdEstimate {
    /// Sum of density times bin width: the mean power the estimate accounts
    /// for, comparable against `Waveform::power`.
    pub fn total_power(&self) -> f64 {
        self.density.iter().sum::<f64>() * self.bin_width_hz
    }
}

/// Welch's averaged periodogram with a Hann window and window-power
/// compensation: segments of `segment_len` samples advance by
/// `segment_len * (1 - overlap_fraction)` and their windowed FFT magnitudes
/// are averaged, so the estimate satisfies Parseval within the leakage of
/// the window. Frequencies are returned in ascending order with DC in the
/// middle.
pub fn psd_welch(w: &Waveform, segment_len: usize, overlap_fraction: f64) -> Result<PsdEstimate> {
    if segment_len < 2 {
        return Err(Error::param("PSD segment length must be at least 2"));
    }
    if segment_len > w.len() {
        return Err(Error::param(format!(
            "PSD segment length {segment_len} exceeds waveform length {}",
            w.len()
        )));
    }
    if !(0.0..1.0).contains(&overlap_fraction) {
        return Err(Error::param("overlap fraction must be in [0,1)"));
    }
    let step = ((segment_len as f64 * (1.0 - overlap_fraction)) as usize).max(1);
    let window: Vec<f64> = (0..segment_len)
        .map(|n| 0.5 - 0.5 * (TAU * n as f64 / segment_len as f64).cos())
        .collect();
    let window_power: f64 = window.iter().map(|v| v * v).sum();
    let fs = w.sample_rate_hz();

    let fft = FftPlanner::new().plan_fft_forward(segment_len);
    let mut acc = vec![0.0f64; segment_len];
    let mut buf = vec![ComplexSample::new(0.0, 0.0); segment_len];
    let samples = w.samples();
    let mut num_segments = 0usize;
    let mut start = 0;
    while start + segment_len <= samples.len() {
        for (b, (s, win)) in buf
            .iter_mut()
            .zip(samples[start..start + segment_len].iter().zip(&window))
        {
            *b = s * win;
        }
        fft.process(&mut buf);
        for (a, v) in acc.iter_mut().zip(&buf) {
            *a += v.norm_sqr();
        }
        num_segments += 1;
        start += step;
    }
    let scale = 1.0 / (num_segments as f64 * fs * window_power);

    // Reorder so the axis runs from -fs/2 upward with DC in the middle.
    let half = segment_len.div_ceil(2);
    let bin_width_hz = fs / segment_len as f64;
    let mut freq_hz = Vec::with_capacity(segment_len);
    let mut density = Vec::with_capacity(segment_len);
    for j in 0..segment_len {
        let k = (j + half) % segment_len;
        let signed = k as isize - if k >= half { segment_len as isize } else { 0 };
        freq_hz.push(signed as f64 * bin_width_hz);
        density.push(acc[k] * scale);
    }
    let peak = density.iter().cloned().fold(0.0f64, f64::max);
    let power_db = density
        .iter()
        .map(|&d| {
            if peak > 0.0 && d > 0.0 {
                10.0 * (d / peak).log10()
            } else {
                f64::MIN.max(-400.0)
            }
        })
        .collect();
    Ok(PsdEstimate {
        freq_hz,
        power_db,
        density,
        bin_width_hz,
    })
}

/// Deterministically thin a symbol frame to at most `max_points` (re, im)
/// pairs by keeping every k-th symbol starting from the first.
pub fn capture_constellation(frame: &SymbolFrame, max_points: usize) -> Result<Vec<(f64, f64)>> {
    if max_points == 0 {
        return Err(Error::param("constellation capture needs max_points >= 1"));
    }
    let stride = frame.len().div_ceil(max_points);
    Ok(frame
        .symbols()
        .iter()
        .step_by(stride)
        .map(|s| (s.re, s.im))
        .collect())
}

/// Gaussian tail probability Q(x) = P(N(0,1) > x), evaluated through the
/// complementary error function in double precision.
pub fn q_function(x: f64) -> f64 {
    0.5 * libm::erfc(x / SQRT_2)
}

/// Closed-form bit error rate of coherent Gray-coded M-PSK on the additive
/// white Gaussian noise channel at the given Eb/N0. Exact for M = 2; the
/// standard nearest-neighbor approximation
/// (2 / log2 M) * Q(sqrt(2 log2 M * g) * sin(pi / M)) for M >= 4.
///
/// `m` must be a power of two, at least 2.
pub fn ber_theory_mpsk_awgn(m: usize, ebn0_db: f64) -> f64 {
    assert!(
        m >= 2 && m.is_power_of_two(),
        "constellation order must be a power of two >= 2"
    );
    let g = db_to_linear(ebn0_db);
    if m == 2 {
        q_function((2.0 * g).sqrt())
    } else {
        let k = (m.trailing_zeros()) as f64;
        (2.0 / k) * q_function((2.0 * k * g).sqrt() * (PI / m as f64).sin())
    }
}

/// Average bit error rate of coherent BPSK on a flat Rayleigh fading
/// channel: 0.5 * (1 - sqrt(g / (1 + g))) at linear average Eb/N0 g.
pub fn ber_theory_bpsk_rayleigh(avg_ebn0_db: f64) -> f64 {
    let g = db_to_linear(avg_ebn0_db);
    0.5 * (1.0 - (g / (1.0 + g)).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modem::{map_bits, PskConfig};
    use crate::pulse::{design_rrc, fir_filter, upsample, RrcSpec};
    use crate::SeedSpec;
    use rand::Rng;
    use rand_distr::StandardNormal;

    #[test]
    fn ber_report_fields() {
        let r = BerReport::from_counts(1000, 1);
        assert_eq!(r.ber, 0.001);
        let expect = 1.96 * (0.001f64 * 0.999 / 1000.0).sqrt();
        assert!((r.ci95_halfwidth - expect).abs() < 1e-12);
        let z = BerReport::from_counts(0, 0);
        assert_eq!((z.ber, z.ci95_halfwidth), (0.0, 0.0));
    }

    #[test]
    fn ber_report_merge_adds_counts() {
        let a = BerReport::from_counts(100, 3).merged(BerReport::from_counts(300, 5));
        assert_eq!(a.bits_compared, 400);
        assert_eq!(a.bit_errors, 8);
        assert_eq!(a.ber, 0.02);
    }

    #[test]
    fn count_ber_identical_complement_and_skip() {
        let tx: Vec<bool> = (0..1000).map(|i| i % 3 == 0).collect();
        let same = count_ber(&tx, &tx, 0).unwrap();
        assert_eq!((same.ber, same.bit_errors), (0.0, 0));
        let flipped: Vec<bool> = tx.iter().map(|b| !b).collect();
        let all = count_ber(&tx, &flipped, 0).unwrap();
        assert_eq!(all.ber, 1.0);
        // One error among 1000 compared, sitting after the skip region.
        let mut one = tx.clone();
        one[700] = !one[700];
        let mut padded_tx = vec![true; 24];
        padded_tx.extend_from_slice(&tx);
        let mut padded_rx: Vec<bool> = vec![false; 24];
        padded_rx.extend_from_slice(&one);
        let r = count_ber(&padded_tx, &padded_rx, 24).unwrap();
        assert_eq!(r.bits_compared, 1000);
        assert_eq!(r.bit_errors, 1);
        assert_eq!(r.ber, 0.001);
    }

    #[test]
    fn count_ber_rejects_bad_inputs() {
        let a = vec![true; 10];
        let b = vec![true; 11];
        assert!(matches!(
            count_ber(&a, &b, 0),
            Err(Error::LengthMismatch { expected: 10, actual: 11 })
        ));
        assert!(count_ber(&a, &a, 10).is_err());
    }

    #[test]
    fn psd_rejects_bad_arguments() {
        let w = Waveform::new(vec![ComplexSample::new(1.0, 0.0); 64], 1e3).unwrap();
        assert!(psd_welch(&w, 128, 0.5).is_err());
        assert!(psd_welch(&w, 1, 0.5).is_err());
        assert!(psd_welch(&w, 32, 1.0).is_err());
        assert!(psd_welch(&w, 32, -0.1).is_err());
    }

    #[test]
    fn psd_axis_is_monotone_and_centered() {
        let w = Waveform::new(vec![ComplexSample::new(1.0, 0.0); 300], 1000.0).unwrap();
        for seg in [64usize, 65] {
            let p = psd_welch(&w, seg, 0.5).unwrap();
            assert_eq!(p.freq_hz.len(), seg);
            for i in 1..seg {
                assert!(p.freq_hz[i] > p.freq_hz[i - 1]);
            }
            assert!(p.freq_hz.contains(&0.0));
            assert!((p.bin_width_hz - 1000.0 / seg as f64).abs() < 1e-9);
        }
    }

    #[test]
    fn tone_peaks_at_its_frequency() {
        let fs = 8000.0;
        let f0 = 1234.0;
        let samples: Vec<ComplexSample> = (0..10_000)
            .map(|n| ComplexSample::from_polar(1.0, TAU * f0 * n as f64 / fs))
            .collect();
        let w = Waveform::new(samples, fs).unwrap();
        let psd = psd_welch(&w, 256, 0.5).unwrap();
        let peak_idx = psd
            .density
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap()
            .0;
        assert!((psd.freq_hz[peak_idx] - f0).abs() <= psd.bin_width_hz);
        let mut sorted = psd.power_db.clone();
        sorted.sort_by(f64::total_cmp);
        let median = sorted[sorted.len() / 2];
        assert!(
            psd.power_db[peak_idx] - median >= 30.0,
            "peak only {} dB above median",
            psd.power_db[peak_idx] - median
        );
    }

    #[test]
    fn white_noise_psd_is_flat_and_parseval_consistent() {
        let mut rng = SeedSpec::root(21).rng();
        let samples: Vec<ComplexSample> = (0..1_000_000)
            .map(|_| {
                ComplexSample::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
            })
            .collect();
        let w = Waveform::new(samples, 2e6).unwrap();
        let psd = psd_welch(&w, 256, 0.5).unwrap();
        let mean_db =
            psd.power_db.iter().sum::<f64>() / psd.power_db.len() as f64;
        let var_db = psd
            .power_db
            .iter()
            .map(|d| (d - mean_db).powi(2))
            .sum::<f64>()
            / psd.power_db.len() as f64;
        assert!(var_db.sqrt() < 1.0, "bin-to-bin std {} dB", var_db.sqrt());
        let ratio = psd.total_power() / w.power();
        assert!((ratio - 1.0).abs() < 0.01, "Parseval ratio {ratio}");
    }

    #[test]
    fn shaped_psk_spectrum_is_contained() {
        let beta = 0.22;
        let sps = 8;
        let symbol_rate = 1e6;
        let spec = RrcSpec::new(beta, 64, sps).unwrap();
        let taps = design_rrc(&spec);
        let cfg = PskConfig::gray(4).unwrap();
        let mut rng = SeedSpec::root(33).rng();
        let bits: Vec<bool> = (0..2 * 50_000).map(|_| rng.random()).collect();
        let frame = map_bits(&bits, &cfg, symbol_rate).unwrap();
        let shaped = fir_filter(&upsample(&frame, sps).unwrap(), &taps);
        let psd = psd_welch(&shaped, 2048, 0.5).unwrap();
        let edge = (1.0 + beta) / 2.0 * symbol_rate;
        let worst_stop = psd
            .freq_hz
            .iter()
            .zip(&psd.power_db)
            .filter(|(f, _)| f.abs() > edge)
            .map(|(_, d)| *d)
            .fold(f64::NEG_INFINITY, f64::max);
        assert!(worst_stop <= -40.0, "stopband only {worst_stop} dB down");
        let ratio = psd.total_power() / shaped.power();
        assert!((ratio - 1.0).abs() < 0.01, "Parseval ratio {ratio}");
    }

    #[test]
    fn constellation_capture_thins_deterministically() {
        let cfg = PskConfig::gray(4).unwrap();
        let mut rng = SeedSpec::root(2).rng();
        let bits: Vec<bool> = (0..2 * 1000).map(|_| rng.random()).collect();
        let frame = map_bits(&bits, &cfg, 1.0).unwrap();
        let pts = capture_constellation(&frame, 300).unwrap();
        assert!(pts.len() <= 300);
        assert_eq!(pts[0], (frame.symbols()[0].re, frame.symbols()[0].im));
        // Noiseless QPSK collapses to exactly 4 distinct points.
        let mut rounded: Vec<(i64, i64)> = pts
            .iter()
            .map(|(re, im)| ((re * 1e9).round() as i64, (im * 1e9).round() as i64))
            .collect();
        rounded.sort_unstable();
        rounded.dedup();
        assert_eq!(rounded.len(), 4);
        assert!(capture_constellation(&frame, 0).is_err());
        let all = capture_constellation(&frame, 1000).unwrap();
        assert_eq!(all.len(), 1000);
    }

    #[test]
    fn noisy_constellation_clusters_have_noise_radius() {
        let cfg = PskConfig::gray(4).unwrap();
        let mut rng = SeedSpec::root(14).rng();
        let bits: Vec<bool> = (0..2 * 20_000).map(|_| rng.random()).collect();
        let frame = map_bits(&bits, &cfg, 1.0).unwrap();
        // 30 dB symbol SNR: complex noise variance 1e-3 around unit symbols.
        let sigma_c = (1e-3f64).sqrt();
        let comp = sigma_c / SQRT_2;
        let noisy: Vec<ComplexSample> = frame
            .symbols()
            .iter()
            .map(|s| {
                s + ComplexSample::new(
                    comp * rng.sample::<f64, _>(StandardNormal),
                    comp * rng.sample::<f64, _>(StandardNormal),
                )
            })
            .collect();
        let noisy_frame = SymbolFrame::new(noisy, 1.0).unwrap();
        let pts = capture_constellation(&noisy_frame, 20_000).unwrap();
        // Group by decided sector and measure the within-cluster RMS radius.
        let mut sums = [(0.0f64, 0u32); 4];
        for (re, im) in &pts {
            let s = ComplexSample::new(*re, *im);
            let k = cfg.hard_decision(s);
            let d = (s - cfg.point(k)).norm_sqr();
            sums[k].0 += d;
            sums[k].1 += 1;
        }
        for (k, (sq, n)) in sums.iter().enumerate() {
            assert!(*n > 3000, "cluster {k} unexpectedly small");
            let rms = (sq / *n as f64).sqrt();
            assert!(
                (rms - sigma_c).abs() < 0.1 * sigma_c,
                "cluster {k} rms {rms} vs sigma {sigma_c}"
            );
        }
    }

    #[test]
    fn theory_bpsk_awgn_reference_points() {
        assert!((ber_theory_mpsk_awgn(2, 0.0) - 0.0786).abs() < 1e-4);
        assert!((ber_theory_mpsk_awgn(2, 0.0) - 0.078649_603_5).abs() < 1e-9);
        assert!((ber_theory_mpsk_awgn(4, 6.0) - 2.3882908e-3).abs() < 1e-9);
        // Gray QPSK behaves as two independent BPSK rails.
        for db in [-2.0, 0.0, 3.0, 6.0, 9.5] {
            let d = ber_theory_mpsk_awgn(4, db) - ber_theory_mpsk_awgn(2, db);
            assert!(d.abs() < 1e-12, "QPSK vs BPSK at {db} dB");
        }
        assert!((ber_theory_mpsk_awgn(16, 10.0) - 0.020248790).abs() < 1e-8);
        assert!((ber_theory_mpsk_awgn(64, 10.0) - 0.098485961).abs() < 1e-8);
    }

    #[test]
    #[should_panic(expected = "power of two")]
    fn theory_rejects_non_power_of_two() {
        ber_theory_mpsk_awgn(12, 5.0);
    }

    #[test]
    fn theory_rayleigh_reference_points() {
        assert!((ber_theory_bpsk_rayleigh(10.0) - 0.02327).abs() < 1e-5);
        assert!((ber_theory_bpsk_rayleigh(10.0) - 0.023268705).abs() < 1e-9);
        // Deep-fade limit.
        assert!((ber_theory_bpsk_rayleigh(-100.0) - 0.5).abs() < 1e-5);
        // Monotone decreasing in average SNR.
        let mut prev = ber_theory_bpsk_rayleigh(-20.0);
        for db in (-19..=40).map(f64::from) {
            let cur = ber_theory_bpsk_rayleigh(db);
            assert!(cur < prev, "not decreasing at {db} dB");
            prev = cur;
        }
    }

    #[test]
    fn q_function_known_values() {
        assert!((q_function(0.0) - 0.5).abs() < 1e-15);
        assert!((q_function(1.0) - 0.158655254).abs() < 1e-9);
        assert!((q_function(3.0) - 1.349898e-3).abs() < 1e-9);
        assert!(q_function(-1.0) + q_function(1.0) - 1.0 < 1e-12);
    }

    #[test]
    fn independent_runs_agree_within_confidence() {
        // 20 independent Bernoulli experiments at the same error rate:
        // every pair of runs should have overlapping 95% intervals at
        // least 90% of the time.
        let p = 0.1;
        let n = 20_000;
        let reports: Vec<BerReport> = (0..20)
            .map(|i| {
                let mut rng = SeedSpec::new(6021, i).rng();
                let errors = (0..n).filter(|_| rng.random::<f64>() < p).count() as u64;
                BerReport::from_counts(n as u64, errors)
            })
            .collect();
        let mut agree = 0;
        let mut total = 0;
        for i in 0..reports.len() {
            for j in i + 1..reports.len() {
                total += 1;
                let gap = (reports[i].ber - reports[j].ber).abs();
                if gap <= reports[i].ci95_halfwidth + reports[j].ci95_halfwidth {
                    agree += 1;
                }
            }
        }
        let frac = agree as f64 / total as f64;
        assert!(frac >= 0.9, "only {frac} of run pairs agree");
    }
}
