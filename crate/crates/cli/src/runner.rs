//! Scenario execution: sweeps modulation x channel x Es/N0, runs seeded
//! Monte-Carlo trials in parallel, and writes CSV artifacts plus a text
//! summary. Outputs are byte-identical across re-runs and worker counts:
//! every trial draws from a stream derived from (master seed, trial label),
//! and results merge by integer addition in a fixed order.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use linksim_core::channel::{
    add_awgn, apply_fading, make_fading, AwgnConfig, FadingConfig, DEFAULT_NUM_OSCILLATORS,
};
use linksim_core::equalizer::{lms_run, LmsConfig};
use linksim_core::interference::{combine, gen_interferer, InterfererSpec};
use linksim_core::metrics::{capture_constellation, count_ber, psd_welch, BerReport, PsdEstimate};
use linksim_core::modem::{demap_symbols, map_bits, PskConfig};
use linksim_core::pulse::{design_rrc, downsample, fir_filter, upsample, RrcSpec};
use linksim_core::{ComplexSample, SeedSpec, SymbolFrame, Waveform};
use rand::Rng;
use rayon::prelude::*;

use crate::config::{ChannelKind, ScenarioConfig};

/// Bits per Monte-Carlo trial; each trial is an independent chain run with
/// its own derived seed, so trials parallelize freely.
const TRIAL_BITS: u64 = 100_000;
const STAGE_DUMP_MAX_SAMPLES: usize = 65_536;
const CAPTURE_MAX_SYMBOLS: usize = 200_000;

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Worker thread count; None uses the rayon default.
    pub jobs: Option<usize>,
    /// Emit one CSV per chain stage for the first combination.
    pub dump_stages: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Sim(#[from] linksim_core::Error),
    #[error("{0}")]
    Other(String),
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> RunError + '_ {
    move |source| RunError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// One (modulation, channel, Es/N0) cell of the sweep.
#[derive(Debug, Clone)]
pub struct ComboResult {
    pub modulation: usize,
    pub channel: ChannelKind,
    pub esn0_db: f64,
    pub doppler_hz: f64,
    pub report: BerReport,
}

#[derive(Debug)]
pub struct RunSummary {
    pub scenario: String,
    pub master_seed: u64,
    pub out_dir: PathBuf,
    pub rows: Vec<ComboResult>,
    pub artifacts: Vec<PathBuf>,
    pub wall_seconds: f64,
}

impl RunSummary {
    /// The structured text report, also written to `summary.txt`.
    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "scenario: {}", self.scenario);
        let _ = writeln!(s, "master_seed: {}", self.master_seed);
        let _ = writeln!(s, "out_dir: {}", self.out_dir.display());
        let _ = writeln!(s, "wall_time_s: {:.3}", self.wall_seconds);
        let _ = writeln!(s, "combinations: {}", self.rows.len());
        let _ = writeln!(s, "rows:");
        for r in &self.rows {
            let _ = writeln!(
                s,
                "  modulation={} channel={} esn0_db={} doppler_hz={} bits={} errors={} ber={} ci95={}",
                r.modulation,
                r.channel.as_str(),
                sig6(r.esn0_db),
                sig6(r.doppler_hz),
                r.report.bits_compared,
                r.report.bit_errors,
                sig6(r.report.ber),
                sig6(r.report.ci95_halfwidth),
            );
        }
        let _ = writeln!(s, "artifacts:");
        for a in &self.artifacts {
            let _ = writeln!(s, "  {}", a.display());
        }
        s
    }
}

/// Format with at most six significant digits, plain notation where
/// reasonable, matching the CSV contract.
fn sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    let e = x.abs().log10().floor() as i32;
    if (-5..15).contains(&e) {
        let dec = (5 - e).max(0) as usize;
        let s = format!("{x:.dec$}");
        let trimmed = if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.')
        } else {
            &s
        };
        trimmed.to_string()
    } else {
        format!("{x:.5e}")
    }
}

fn esn0_token(x: f64) -> String {
    if x.is_infinite() {
        return "inf".to_string();
    }
    sig6(x).replace('-', "m").replace('.', "p")
}

#[derive(Debug, Clone)]
struct Combo {
    modulation: usize,
    channel: ChannelKind,
    esn0_db: f64,
    doppler_hz: f64,
    /// Seed-label fragment `<mod>/<chan>/<esn0>`.
    label: String,
}

fn enumerate_combos(cfg: &ScenarioConfig) -> Vec<Combo> {
    let mut combos = Vec::new();
    for &m in &cfg.modulations {
        for &ch in &cfg.channels {
            let esn0s: Vec<f64> = if ch.uses_noise() {
                cfg.esn0_db_list.clone()
            } else {
                vec![f64::INFINITY]
            };
            for esn0 in esn0s {
                combos.push(Combo {
                    modulation: m,
                    channel: ch,
                    esn0_db: esn0,
                    doppler_hz: if ch.uses_fading() { cfg.doppler_hz } else { 0.0 },
                    label: format!("{m}/{}/{esn0}", ch.as_str()),
                });
            }
        }
    }
    combos
}

#[derive(Default)]
struct Keep {
    tx_wave: bool,
    rx_wave: bool,
    rx_symbols: bool,
    stages: bool,
}

struct ChainOutput {
    report: BerReport,
    tx_wave: Option<Waveform>,
    rx_wave: Option<Waveform>,
    rx_symbols: Option<SymbolFrame>,
    stages: Vec<(&'static str, Vec<ComplexSample>)>,
}

fn truncated(samples: &[ComplexSample]) -> Vec<ComplexSample> {
    samples[..samples.len().min(STAGE_DUMP_MAX_SAMPLES)].to_vec()
}

/// Run one seeded pass of the full chain for `n_symbols` information
/// symbols (the shaping filter span is padded on top internally).
fn run_chain(
    cfg: &ScenarioConfig,
    combo: &Combo,
    seed: SeedSpec,
    n_symbols: usize,
    keep: &Keep,
) -> Result<ChainOutput, linksim_core::Error> {
    let psk = PskConfig::gray(combo.modulation)?;
    let bps = psk.bits_per_symbol();
    let pulse = RrcSpec::new(cfg.rolloff, cfg.filter_span_symbols, cfg.samples_per_symbol)?;
    let taps = design_rrc(&pulse);
    let sps = cfg.samples_per_symbol;
    let span = cfg.filter_span_symbols;
    let fs = cfg.sample_rate_hz();
    let rs = cfg.symbol_rate_hz;
    let mut stages: Vec<(&'static str, Vec<ComplexSample>)> = Vec::new();

    let mut rng = seed.derive("bits").rng();
    let bits: Vec<bool> = (0..(n_symbols + span) * bps).map(|_| rng.random()).collect();
    let frame = map_bits(&bits, &psk, rs)?;
    if keep.stages {
        stages.push(("modulate", truncated(frame.symbols())));
    }
    let up = upsample(&frame, sps)?;
    if keep.stages {
        stages.push(("upsample", truncated(up.samples())));
    }
    let shaped = fir_filter(&up, &taps);
    if keep.stages {
        stages.push(("rrc_tx", truncated(shaped.samples())));
    }
    let tx_wave = keep.tx_wave.then(|| shaped.clone());

    let mut medium = shaped;
    let pre: Vec<Waveform> = cfg
        .interferers
        .iter()
        .enumerate()
        .filter(|(_, i)| !i.post_channel)
        .map(|(idx, i)| {
            let spec = InterfererSpec::new(
                i.kind,
                i.cir_db,
                i.freq_offset_hz,
                PskConfig::gray(i.modulation)?,
                RrcSpec::new(cfg.rolloff, cfg.filter_span_symbols, cfg.samples_per_symbol)?,
                seed.derive(&format!("interferer/{idx}")),
            )?;
            gen_interferer(&spec, medium.len(), fs)
        })
        .collect::<Result<_, _>>()?;
    if !pre.is_empty() {
        medium = combine(&medium, &pre)?;
        if keep.stages {
            stages.push(("interference", truncated(medium.samples())));
        }
    }

    if combo.channel.uses_fading() {
        let fading = if cfg.paths.is_empty() {
            FadingConfig::flat(cfg.doppler_hz, fs, seed.derive("fade"))
        } else {
            FadingConfig {
                paths: cfg.paths.clone(),
                doppler_hz: cfg.doppler_hz,
                sample_rate_hz: fs,
                normalize_total_power: true,
                num_oscillators: DEFAULT_NUM_OSCILLATORS,
                seed: seed.derive("fade"),
            }
        };
        let process = make_fading(&fading, medium.len())?;
        medium = apply_fading(&medium, &process)?;
    }
    medium = add_awgn(
        &medium,
        &AwgnConfig::new(combo.esn0_db, sps, seed.derive("awgn"))?,
    );
    if keep.stages {
        stages.push(("channel", truncated(medium.samples())));
    }

    let post: Vec<Waveform> = cfg
        .interferers
        .iter()
        .enumerate()
        .filter(|(_, i)| i.post_channel)
        .map(|(idx, i)| {
            let spec = InterfererSpec::new(
                i.kind,
                i.cir_db,
                i.freq_offset_hz,
                PskConfig::gray(i.modulation)?,
                RrcSpec::new(cfg.rolloff, cfg.filter_span_symbols, cfg.samples_per_symbol)?,
                seed.derive(&format!("interferer/{idx}")),
            )?;
            gen_interferer(&spec, medium.len(), fs)
        })
        .collect::<Result<_, _>>()?;
    if !post.is_empty() {
        medium = combine(&medium, &post)?;
        if keep.stages {
            stages.push(("interference_post", truncated(medium.samples())));
        }
    }
    let rx_wave = keep.rx_wave.then(|| medium.clone());

    let matched = fir_filter(&medium, &taps);
    if keep.stages {
        stages.push(("rrc_rx", truncated(matched.samples())));
    }
    let down = downsample(&matched, sps, span * sps)?;
    let rx = SymbolFrame::new(down.symbols()[..n_symbols].to_vec(), rs)?;
    if keep.stages {
        stages.push(("downsample", truncated(rx.symbols())));
    }

    let mut skip_symbols = 0usize;
    let mut delay = 0usize;
    let rx_final = match &cfg.equalizer {
        Some(eq) => {
            let effective = LmsConfig::new(
                eq.num_taps(),
                eq.step_size(),
                eq.training_len().min(n_symbols),
                eq.reference_delay_symbols(),
            )?;
            let tx_frame = SymbolFrame::new(frame.symbols()[..n_symbols].to_vec(), rs)?;
            let out = lms_run(&rx, &tx_frame, &psk, &effective)?;
            // Mixed training/decision-directed runs are scored on the
            // decision-directed region. When training spans the whole run
            // (pilot-aided tracking), outputs are honest one-step
            // predictions, so only the initial convergence window is
            // excluded from the count.
            skip_symbols = if eq.training_len() >= n_symbols {
                (n_symbols / 10).min(1000)
            } else {
                effective.training_len()
            };
            delay = effective.reference_delay_symbols().min(n_symbols - 1);
            if keep.stages {
                stages.push(("equalize", truncated(out.equalized.symbols())));
            }
            out.equalized
        }
        None => rx,
    };
    let rx_bits = demap_symbols(&rx_final, &psk);
    // The equalizer output at index n estimates the symbol sent at
    // n - reference_delay, so comparison shifts by the delay.
    let report = count_ber(
        &bits[..(n_symbols - delay) * bps],
        &rx_bits[delay * bps..n_symbols * bps],
        skip_symbols.min(n_symbols - delay) * bps,
    )?;
    Ok(ChainOutput {
        report,
        tx_wave,
        rx_wave,
        rx_symbols: keep.rx_symbols.then_some(rx_final),
        stages,
    })
}

fn trial_sizes(num_bits: u64, bps: usize) -> Vec<usize> {
    let bps = bps as u64;
    let total_symbols = num_bits.div_ceil(bps);
    let trial_symbols = TRIAL_BITS.div_ceil(bps);
    let mut sizes = Vec::new();
    let mut remaining = total_symbols;
    while remaining > 0 {
        let take = remaining.min(trial_symbols);
        sizes.push(take as usize);
        remaining -= take;
    }
    sizes
}

fn capture_symbol_count(cfg: &ScenarioConfig) -> usize {
    let mut n = 4096;
    if cfg.outputs.psd_tx || cfg.outputs.psd_rx {
        n = n.max((cfg.psd_segment_len * 33).div_ceil(cfg.samples_per_symbol));
    }
    if cfg.outputs.constellation {
        n = n.max(cfg.constellation_max_points * 2);
    }
    n.min(CAPTURE_MAX_SYMBOLS)
}

fn write_file(path: &Path, contents: &str) -> Result<(), RunError> {
    fs::write(path, contents).map_err(io_err(path))
}

fn psd_csv(est: &PsdEstimate) -> String {
    let mut s = String::from("freq_hz,power_db\n");
    for (f, p) in est.freq_hz.iter().zip(&est.power_db) {
        let _ = writeln!(s, "{},{}", sig6(*f), sig6(*p));
    }
    s
}

fn constellation_csv(points: &[(f64, f64)]) -> String {
    let mut s = String::from("re,im\n");
    for (re, im) in points {
        let _ = writeln!(s, "{},{}", sig6(*re), sig6(*im));
    }
    s
}

/// Execute a validated scenario, writing artifacts into `out_dir`.
pub fn run_scenario(
    cfg: &ScenarioConfig,
    out_dir: &Path,
    opts: &RunOptions,
) -> Result<RunSummary, RunError> {
    let started = Instant::now();
    fs::create_dir_all(out_dir).map_err(io_err(out_dir))?;
    let root = SeedSpec::root(cfg.master_seed);
    let combos = enumerate_combos(cfg);

    // Flat list of (combo index, trial index, symbols) in deterministic order.
    let mut trials = Vec::new();
    for (ci, combo) in combos.iter().enumerate() {
        let bps = PskConfig::gray(combo.modulation)?.bits_per_symbol();
        for (ti, n_symbols) in trial_sizes(cfg.num_bits, bps).into_iter().enumerate() {
            trials.push((ci, ti, n_symbols));
        }
    }

    let worker = |&(ci, ti, n_symbols): &(usize, usize, usize)| -> Result<(usize, BerReport), RunError> {
        let combo = &combos[ci];
        let seed = root.derive(&format!("trial/{}/{ti}", combo.label));
        let out = run_chain(cfg, combo, seed, n_symbols, &Keep::default())?;
        Ok((ci, out.report))
    };
    let trial_reports: Vec<(usize, BerReport)> = match opts.jobs {
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build()
            .map_err(|e| RunError::Other(format!("cannot build thread pool: {e}")))?
            .install(|| trials.par_iter().map(worker).collect::<Result<_, _>>())?,
        None => trials.par_iter().map(worker).collect::<Result<_, _>>()?,
    };

    // Merge by integer counters in combo order; order of summation cannot
    // change the totals, so worker count does not affect the output.
    let mut rows: Vec<ComboResult> = combos
        .iter()
        .map(|c| ComboResult {
            modulation: c.modulation,
            channel: c.channel,
            esn0_db: c.esn0_db,
            doppler_hz: c.doppler_hz,
            report: BerReport::from_counts(0, 0),
        })
        .collect();
    let mut totals = vec![(0u64, 0u64); combos.len()];
    for (ci, report) in trial_reports {
        totals[ci].0 += report.bits_compared;
        totals[ci].1 += report.bit_errors;
    }
    for (row, (bits, errors)) in rows.iter_mut().zip(totals) {
        row.report = BerReport::from_counts(bits, errors);
    }

    let mut artifacts = Vec::new();

    if cfg.outputs.ber {
        let mut csv = String::from("modulation,channel,esn0_db,doppler_hz,bits,errors,ber,ci95\n");
        for r in &rows {
            let _ = writeln!(
                csv,
                "{},{},{},{},{},{},{},{}",
                r.modulation,
                r.channel.as_str(),
                sig6(r.esn0_db),
                sig6(r.doppler_hz),
                r.report.bits_compared,
                r.report.bit_errors,
                sig6(r.report.ber),
                sig6(r.report.ci95_halfwidth),
            );
        }
        let path = out_dir.join("ber.csv");
        write_file(&path, &csv)?;
        artifacts.push(path);
    }

    // Capture passes: one deterministic sequential chain per combination
    // for spectra, constellations, and the optional stage dump.
    let want_capture =
        cfg.outputs.psd_tx || cfg.outputs.psd_rx || cfg.outputs.constellation || opts.dump_stages;
    if want_capture {
        let n_symbols = capture_symbol_count(cfg);
        for (ci, combo) in combos.iter().enumerate() {
            let keep = Keep {
                tx_wave: cfg.outputs.psd_tx,
                rx_wave: cfg.outputs.psd_rx,
                rx_symbols: cfg.outputs.constellation,
                stages: opts.dump_stages && ci == 0,
            };
            if !(keep.tx_wave || keep.rx_wave || keep.rx_symbols || keep.stages) {
                break;
            }
            let seed = root.derive(&format!("capture/{}", combo.label));
            let out = run_chain(cfg, combo, seed, n_symbols, &keep)?;
            let tag = format!(
                "m{}_{}_esn0_{}",
                combo.modulation,
                combo.channel.as_str(),
                esn0_token(combo.esn0_db)
            );
            if let Some(w) = &out.tx_wave {
                let est = psd_welch(w, cfg.psd_segment_len, 0.5)?;
                let path = out_dir.join(format!("psd_tx_{tag}.csv"));
                write_file(&path, &psd_csv(&est))?;
                artifacts.push(path);
            }
            if let Some(w) = &out.rx_wave {
                let est = psd_welch(w, cfg.psd_segment_len, 0.5)?;
                let path = out_dir.join(format!("psd_rx_{tag}.csv"));
                write_file(&path, &psd_csv(&est))?;
                artifacts.push(path);
            }
            if let Some(frame) = &out.rx_symbols {
                let points = capture_constellation(frame, cfg.constellation_max_points)?;
                let path = out_dir.join(format!("constellation_{tag}.csv"));
                write_file(&path, &constellation_csv(&points))?;
                artifacts.push(path);
            }
            for (si, (name, samples)) in out.stages.iter().enumerate() {
                let path = out_dir.join(format!("stage_{:02}_{name}.csv", si + 1));
                let mut csv = String::from("re,im\n");
                for c in samples {
                    let _ = writeln!(csv, "{},{}", sig6(c.re), sig6(c.im));
                }
                write_file(&path, &csv)?;
                artifacts.push(path);
            }
        }
    }

    let mut summary = RunSummary {
        scenario: cfg.name.clone(),
        master_seed: cfg.master_seed,
        out_dir: out_dir.to_path_buf(),
        rows,
        artifacts,
        wall_seconds: started.elapsed().as_secs_f64(),
    };
    let summary_path = out_dir.join("summary.txt");
    write_file(&summary_path, &summary.render())?;
    summary.artifacts.push(summary_path);
    Ok(summary)
}
