//! M-ary phase-shift keying: bit-to-symbol mapping, hard-decision
//! demapping, and the Gray labeling that makes neighboring constellation
//! points differ in a single bit.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::signal::{ComplexSample, SymbolFrame};

/// Parameters of an M-PSK constellation on the unit circle.
#[derive(Debug, Clone, PartialEq)]
pub struct PskConfig {
    order_m: usize,
    phase_offset_rad: f64,
    gray_coded: bool,
}

impl PskConfig {
    /// `order_m` must be a power of two, at least 2.
    pub fn new(order_m: usize, phase_offset_rad: f64, gray_coded: bool) -> Result<Self> {
        if order_m < 2 || !order_m.is_power_of_two() {
            return Err(Error::param(format!(
                "constellation order must be a power of two >= 2, got {order_m}"
            )));
        }
        if !phase_offset_rad.is_finite() {
            return Err(Error::param("phase offset must be finite"));
        }
        Ok(PskConfig {
            order_m,
            phase_offset_rad,
            gray_coded,
        })
    }

    /// Gray-coded constellation with zero phase offset.
    pub fn gray(order_m: usize) -> Result<Self> {
        PskConfig::new(order_m, 0.0, true)
    }

    pub fn order(&self) -> usize {
        self.order_m
    }

    pub fn bits_per_symbol(&self) -> usize {
        self.order_m.trailing_zeros() as usize
    }

    pub fn phase_offset_rad(&self) -> f64 {
        self.phase_offset_rad
    }

    pub fn gray_coded(&self) -> bool {
        self.gray_coded
    }

    /// Constellation point for symbol index `k`: exp(j(2 pi k / M + offset)).
    pub fn point(&self, k: usize) -> ComplexSample {
        debug_assert!(k < self.order_m);
        ComplexSample::from_polar(
            1.0,
            TAU * k as f64 / self.order_m as f64 + self.phase_offset_rad,
        )
    }

    /// Hard decision: index of the phase sector `sym` falls in. Sector k is
    /// centered on `point(k)` and spans 2 pi / M; a value exactly on the
    /// boundary between two sectors goes to the counter-clockwise one. The
    /// origin (phase 0 after offset removal) decides sector 0.
    pub fn hard_decision(&self, sym: ComplexSample) -> usize {
        let m = self.order_m as f64;
        let x = (sym.arg() - self.phase_offset_rad) * m / TAU;
        let k = (x + 0.5).floor() as i64;
        k.rem_euclid(self.order_m as i64) as usize
    }
}

/// Binary-reflected Gray code of `k`.
pub fn gray_encode(k: u64) -> u64 {
    k ^ (k >> 1)
}

/// Inverse of [`gray_encode`].
pub fn gray_decode(g: u64) -> u64 {
    let mut k = g;
    let mut s = g >> 1;
    while s != 0 {
        k ^= s;
        s >>= 1;
    }
    k
}

/// Map a bit sequence to constellation symbols. Bits are consumed most
/// significant first; each group of log2(M) bits forms the label v, and the
/// transmitted symbol index is gray_decode(v) when Gray coding is enabled
/// (so labels of adjacent points differ in one bit) or v itself otherwise.
pub fn map_bits(bits: &[bool], cfg: &PskConfig, symbol_rate_hz: f64) -> Result<SymbolFrame> {
    let bps = cfg.bits_per_symbol();
    if bits.is_empty() || bits.len() % bps != 0 {
        return Err(Error::BitCount {
            len: bits.len(),
            bits_per_symbol: bps,
        });
    }
    let symbols = bits
        .chunks(bps)
        .map(|group| {
            let v = group.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64);
            let k = if cfg.gray_coded() { gray_decode(v) } else { v };
            cfg.point(k as usize)
        })
        .collect();
    SymbolFrame::new(symbols, symbol_rate_hz)
}

/// Hard-decide each received symbol and emit its bit label, most significant
/// bit first. Inverse of [`map_bits`] for noiseless input.
pub fn demap_symbols(frame: &SymbolFrame, cfg: &PskConfig) -> Vec<bool> {
    let bps = cfg.bits_per_symbol();
    let mut bits = Vec::with_capacity(frame.len() * bps);
    for &sym in frame.symbols() {
        let k = cfg.hard_decision(sym) as u64;
        let v = if cfg.gray_coded() { gray_encode(k) } else { k };
        for i in (0..bps).rev() {
            bits.push((v >> i) & 1 == 1);
        }
    }
    bits
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;

    fn random_bits(n: usize, seed: u64) -> Vec<bool> {
        let mut rng = crate::SeedSpec::root(seed).rng();
        (0..n).map(|_| rng.random()).collect()
    }

    #[test]
    fn rejects_bad_orders() {
        for m in [0, 1, 3, 6, 12, 100] {
            assert!(PskConfig::new(m, 0.0, true).is_err(), "order {m}");
        }
        for m in [2, 4, 8, 16, 32, 64, 128, 256] {
            assert!(PskConfig::new(m, 0.0, true).is_ok(), "order {m}");
        }
    }

    #[test]
    fn gray_three_bit_table() {
        let got: Vec<u64> = (0..8).map(gray_encode).collect();
        assert_eq!(got, vec![0, 1, 3, 2, 6, 7, 5, 4]);
    }

    #[test]
    fn gray_adjacent_codes_differ_in_one_bit() {
        for m in [2u64, 4, 8, 16, 32, 64, 128, 256] {
            for k in 0..m {
                let diff = gray_encode(k) ^ gray_encode((k + 1) % m);
                assert_eq!(diff.count_ones(), 1, "order {m} index {k}");
            }
        }
    }

    proptest! {
        #[test]
        fn gray_decode_inverts_encode(k in 0u64..=u32::MAX as u64) {
            prop_assert_eq!(gray_decode(gray_encode(k)), k);
        }
    }

    #[test]
    fn qpsk_mapping_places_labels_gray_around_circle() {
        let cfg = PskConfig::gray(4).unwrap();
        // Label v (MSB first) -> expected symbol index gray_decode(v).
        let cases = [
            ([false, false], 0usize),
            ([false, true], 1),
            ([true, true], 2),
            ([true, false], 3),
        ];
        for (bits, k) in cases {
            let frame = map_bits(&bits, &cfg, 1.0).unwrap();
            let expect = cfg.point(k);
            let got = frame.symbols()[0];
            assert!((got - expect).norm() < 1e-12, "bits {bits:?}");
        }
    }

    #[test]
    fn bpsk_is_antipodal() {
        let cfg = PskConfig::gray(2).unwrap();
        let frame = map_bits(&[false, true], &cfg, 1.0).unwrap();
        assert!((frame.symbols()[0] - ComplexSample::new(1.0, 0.0)).norm() < 1e-12);
        assert!((frame.symbols()[1] - ComplexSample::new(-1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn map_rejects_partial_symbol() {
        let cfg = PskConfig::gray(16).unwrap();
        let err = map_bits(&random_bits(13, 5), &cfg, 1.0).unwrap_err();
        assert_eq!(
            err,
            Error::BitCount {
                len: 13,
                bits_per_symbol: 4
            }
        );
        assert!(map_bits(&[], &cfg, 1.0).is_err());
    }

    #[test]
    fn round_trip_all_orders_with_and_without_gray() {
        for m in [2usize, 4, 8, 16, 32, 64, 128, 256] {
            for gray in [false, true] {
                for offset in [0.0, 0.4, -2.9] {
                    let cfg = PskConfig::new(m, offset, gray).unwrap();
                    let bps = cfg.bits_per_symbol();
                    let bits = random_bits(bps * 400, m as u64);
                    let frame = map_bits(&bits, &cfg, 1e6).unwrap();
                    assert_eq!(demap_symbols(&frame, &cfg), bits, "M={m} gray={gray}");
                }
            }
        }
    }

    #[test]
    fn every_label_round_trips_exactly_once_at_m256() {
        let cfg = PskConfig::gray(256).unwrap();
        let mut bits = Vec::new();
        for v in 0..256u64 {
            for i in (0..8).rev() {
                bits.push((v >> i) & 1 == 1);
            }
        }
        let frame = map_bits(&bits, &cfg, 1.0).unwrap();
        assert_eq!(frame.len(), 256);
        assert_eq!(demap_symbols(&frame, &cfg), bits);
    }

    #[test]
    fn phase_offset_rotates_zero_offset_constellation() {
        let theta = 1.234_567;
        let plain = PskConfig::new(8, 0.0, true).unwrap();
        let rotated = PskConfig::new(8, theta, true).unwrap();
        let bits = random_bits(3 * 200, 11);
        let a = map_bits(&bits, &plain, 1.0).unwrap();
        let b = map_bits(&bits, &rotated, 1.0).unwrap();
        let rot = ComplexSample::from_polar(1.0, theta);
        for (x, y) in a.symbols().iter().zip(b.symbols()) {
            assert!((x * rot - y).norm() < 1e-12);
        }
    }

    #[test]
    fn boundary_ties_go_counter_clockwise() {
        let m = 8;
        let cfg = PskConfig::gray(m).unwrap();
        let sector = TAU / m as f64;
        // Boundary between sector 0 and sector 1 sits at half a sector.
        let on_boundary = ComplexSample::from_polar(1.0, sector / 2.0);
        assert_eq!(cfg.hard_decision(on_boundary), 1);
        // Boundary between sector 2 and 3.
        let b23 = ComplexSample::from_polar(1.0, 2.5 * sector);
        assert_eq!(cfg.hard_decision(b23), 3);
    }

    #[test]
    fn zero_symbol_decides_deterministically() {
        for m in [2, 4, 64] {
            let cfg = PskConfig::gray(m).unwrap();
            assert_eq!(cfg.hard_decision(ComplexSample::new(0.0, 0.0)), 0);
        }
    }

    proptest! {
        #[test]
        fn decision_correct_when_phase_error_below_half_sector(
            m_exp in 1u32..=8,
            k_frac in 0.0..1.0f64,
            err_frac in -0.999..0.999f64,
            amp in 0.01..10.0f64,
            offset in -3.0..3.0f64,
        ) {
            let m = 1usize << m_exp;
            let cfg = PskConfig::new(m, offset, true).unwrap();
            let k = ((k_frac * m as f64) as usize).min(m - 1);
            let half_sector = std::f64::consts::PI / m as f64;
            let phase = TAU * k as f64 / m as f64 + offset + err_frac * half_sector;
            let sym = ComplexSample::from_polar(amp, phase);
            prop_assert_eq!(cfg.hard_decision(sym), k);
        }
    }
}
