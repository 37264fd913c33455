//! Scenario file parsing and validation.
//!
//! Scenario files are TOML. Validation walks the raw document rather than
//! deserializing, so every problem is reported in one pass (including
//! unknown keys, which are rejected to catch typos).

use linksim_core::channel::PathSpec;
use linksim_core::equalizer::LmsConfig;
use linksim_core::interference::InterfererKind;
use toml::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelKind {
    Awgn,
    Rayleigh,
    RayleighPlusAwgn,
}

impl ChannelKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ChannelKind::Awgn => "awgn",
            ChannelKind::Rayleigh => "rayleigh",
            ChannelKind::RayleighPlusAwgn => "rayleigh_plus_awgn",
        }
    }

    pub fn uses_noise(&self) -> bool {
        matches!(self, ChannelKind::Awgn | ChannelKind::RayleighPlusAwgn)
    }

    pub fn uses_fading(&self) -> bool {
        matches!(self, ChannelKind::Rayleigh | ChannelKind::RayleighPlusAwgn)
    }

    fn parse(s: &str) -> Option<ChannelKind> {
        match s {
            "awgn" => Some(ChannelKind::Awgn),
            "rayleigh" => Some(ChannelKind::Rayleigh),
            "rayleigh_plus_awgn" => Some(ChannelKind::RayleighPlusAwgn),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct OutputSet {
    pub ber: bool,
    pub psd_tx: bool,
    pub psd_rx: bool,
    pub constellation: bool,
}

/// One interfering transmitter as configured; the frequency offset is
/// already resolved (adjacent-channel default: +1.25 x symbol rate).
#[derive(Debug, Clone, PartialEq)]
pub struct InterfererSetting {
    pub kind: InterfererKind,
    pub cir_db: f64,
    pub freq_offset_hz: f64,
    pub modulation: usize,
    pub post_channel: bool,
}

/// Fully resolved scenario: every field has a value, either from the file
/// or from the documented default.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub name: String,
    pub modulations: Vec<usize>,
    pub channels: Vec<ChannelKind>,
    pub esn0_db_list: Vec<f64>,
    pub doppler_hz: f64,
    pub paths: Vec<PathSpec>,
    pub rolloff: f64,
    pub samples_per_symbol: usize,
    pub filter_span_symbols: usize,
    pub symbol_rate_hz: f64,
    pub interferers: Vec<InterfererSetting>,
    pub equalizer: Option<LmsConfig>,
    pub num_bits: u64,
    pub master_seed: u64,
    pub outputs: OutputSet,
    pub psd_segment_len: usize,
    pub constellation_max_points: usize,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            name: "scenario".to_string(),
            modulations: vec![4],
            channels: vec![ChannelKind::Awgn],
            esn0_db_list: vec![10.0],
            doppler_hz: 10.0,
            paths: Vec::new(),
            rolloff: 0.22,
            samples_per_symbol: 8,
            filter_span_symbols: 16,
            symbol_rate_hz: 1e4,
            interferers: Vec::new(),
            equalizer: None,
            num_bits: 1_000_000,
            master_seed: 1,
            outputs: OutputSet {
                ber: true,
                ..OutputSet::default()
            },
            psd_segment_len: 2048,
            constellation_max_points: 5000,
        }
    }
}

impl ScenarioConfig {
    pub fn sample_rate_hz(&self) -> f64 {
        self.symbol_rate_hz * self.samples_per_symbol as f64
    }

    /// Render the resolved configuration, one `key = value` line per field.
    pub fn describe(&self) -> String {
        let mut s = String::new();
        let mut line = |k: &str, v: String| {
            s.push_str(k);
            s.push_str(" = ");
            s.push_str(&v);
            s.push('\n');
        };
        line("name", format!("{:?}", self.name));
        line("modulations", format!("{:?}", self.modulations));
        line(
            "channel",
            format!(
                "{:?}",
                self.channels.iter().map(|c| c.as_str()).collect::<Vec<_>>()
            ),
        );
        line("esn0_db_list", format!("{:?}", self.esn0_db_list));
        line("doppler_hz", format!("{}", self.doppler_hz));
        line(
            "paths",
            if self.paths.is_empty() {
                "[] (flat fading)".to_string()
            } else {
                self.paths
                    .iter()
                    .map(|p| format!("{{ delay_samples = {}, avg_gain_db = {} }}", p.delay_samples, p.avg_gain_db))
                    .collect::<Vec<_>>()
                    .join(", ")
            },
        );
        line("rolloff", format!("{}", self.rolloff));
        line("samples_per_symbol", format!("{}", self.samples_per_symbol));
        line("filter_span_symbols", format!("{}", self.filter_span_symbols));
        line("symbol_rate_hz", format!("{}", self.symbol_rate_hz));
        line(
            "interferers",
            format!(
                "[{}]",
                self.interferers
                    .iter()
                    .map(|i| format!(
                        "{{ kind = {:?}, cir_db = {}, freq_offset_hz = {}, modulation = {}, post_channel = {} }}",
                        match i.kind {
                            InterfererKind::CoChannel => "co_channel",
                            InterfererKind::AdjacentChannel => "adjacent_channel",
                        },
                        i.cir_db,
                        i.freq_offset_hz,
                        i.modulation,
                        i.post_channel
                    ))
                    .collect::<Vec<_>>()
                    .join(", ")
            ),
        );
        line(
            "equalizer",
            match &self.equalizer {
                None => "none".to_string(),
                Some(e) => format!(
                    "{{ num_taps = {}, step_size = {}, training_len = {}, reference_delay_symbols = {} }}",
                    e.num_taps(),
                    e.step_size(),
                    e.training_len(),
                    e.reference_delay_symbols()
                ),
            },
        );
        line("num_bits", format!("{}", self.num_bits));
        line("master_seed", format!("{}", self.master_seed));
        let mut outs = Vec::new();
        if self.outputs.ber {
            outs.push("ber");
        }
        if self.outputs.psd_tx {
            outs.push("psd_tx");
        }
        if self.outputs.psd_rx {
            outs.push("psd_rx");
        }
        if self.outputs.constellation {
            outs.push("constellation");
        }
        line("outputs", format!("{outs:?}"));
        line("psd_segment_len", format!("{}", self.psd_segment_len));
        line(
            "constellation_max_points",
            format!("{}", self.constellation_max_points),
        );
        s
    }
}

const KNOWN_KEYS: &[&str] = &[
    "name",
    "modulations",
    "channel",
    "esn0_db_list",
    "doppler_hz",
    "paths",
    "rolloff",
    "samples_per_symbol",
    "filter_span_symbols",
    "symbol_rate_hz",
    "interferers",
    "equalizer",
    "num_bits",
    "master_seed",
    "outputs",
    "psd_segment_len",
    "constellation_max_points",
];

fn as_number(v: &Value) -> Option<f64> {
    match v {
        Value::Integer(i) => Some(*i as f64),
        Value::Float(f) => Some(*f),
        _ => None,
    }
}

fn as_integer(v: &Value) -> Option<i64> {
    match v {
        Value::Integer(i) => Some(*i),
        _ => None,
    }
}

struct Walker<'a> {
    table: &'a toml::Table,
    errors: Vec<String>,
}

impl<'a> Walker<'a> {
    fn number(&mut self, key: &str, message: &str) -> Option<f64> {
        match self.table.get(key) {
            None => None,
            Some(v) => match as_number(v) {
                Some(x) => Some(x),
                None => {
                    self.errors.push(message.to_string());
                    None
                }
            },
        }
    }

    fn integer(&mut self, key: &str, message: &str) -> Option<i64> {
        match self.table.get(key) {
            None => None,
            Some(v) => match as_integer(v) {
                Some(x) => Some(x),
                None => {
                    self.errors.push(message.to_string());
                    None
                }
            },
        }
    }

    fn err(&mut self, message: impl Into<String>) {
        self.errors.push(message.into());
    }
}

fn check_unknown_keys(table: &toml::Table, known: &[&str], prefix: &str, errors: &mut Vec<String>) {
    for key in table.keys() {
        if !known.contains(&key.as_str()) {
            if prefix.is_empty() {
                errors.push(format!("unknown key \"{key}\""));
            } else {
                errors.push(format!("unknown key \"{prefix}.{key}\""));
            }
        }
    }
}

fn parse_modulation_order(v: &Value, label: &str, errors: &mut Vec<String>) -> Option<usize> {
    match as_integer(v) {
        Some(m) if m >= 2 && (m as u64).is_power_of_two() => Some(m as usize),
        _ => {
            errors.push(format!("{label} must be a power of two >= 2"));
            None
        }
    }
}

fn parse_paths(list: &[Value], errors: &mut Vec<String>) -> Vec<PathSpec> {
    let mut out = Vec::new();
    let mut prev: Option<usize> = None;
    for (i, item) in list.iter().enumerate() {
        let Some(t) = item.as_table() else {
            errors.push(format!("paths[{i}] must be a table"));
            continue;
        };
        check_unknown_keys(t, &["delay_samples", "avg_gain_db"], &format!("paths[{i}]"), errors);
        let delay = match t.get("delay_samples").and_then(as_integer) {
            Some(d) if d >= 0 => d as usize,
            _ => {
                errors.push(format!("paths[{i}].delay_samples must be a nonnegative integer"));
                continue;
            }
        };
        if i == 0 && delay != 0 {
            errors.push("paths[0].delay_samples must be 0".to_string());
        }
        if let Some(p) = prev {
            if delay <= p {
                errors.push(format!(
                    "paths[{i}].delay_samples must be greater than the previous delay"
                ));
            }
        }
        prev = Some(delay);
        let gain = match t.get("avg_gain_db").and_then(as_number) {
            Some(g) if g.is_finite() => g,
            _ => {
                errors.push(format!("paths[{i}].avg_gain_db must be a finite number"));
                continue;
            }
        };
        out.push(PathSpec {
            delay_samples: delay,
            avg_gain_db: gain,
        });
    }
    out
}

fn parse_interferers(
    list: &[Value],
    symbol_rate_hz: f64,
    errors: &mut Vec<String>,
) -> Vec<InterfererSetting> {
    let mut out = Vec::new();
    for (i, item) in list.iter().enumerate() {
        let Some(t) = item.as_table() else {
            errors.push(format!("interferers[{i}] must be a table"));
            continue;
        };
        check_unknown_keys(
            t,
            &["kind", "cir_db", "freq_offset_hz", "modulation", "post_channel"],
            &format!("interferers[{i}]"),
            errors,
        );
        let kind = match t.get("kind").and_then(Value::as_str) {
            Some("co_channel") => InterfererKind::CoChannel,
            Some("adjacent_channel") => InterfererKind::AdjacentChannel,
            _ => {
                errors.push(format!(
                    "interferers[{i}].kind must be \"co_channel\" or \"adjacent_channel\""
                ));
                continue;
            }
        };
        let cir_db = match t.get("cir_db").and_then(as_number) {
            Some(c) if !c.is_nan() && c != f64::NEG_INFINITY => c,
            Some(_) => {
                errors.push(format!(
                    "interferers[{i}].cir_db must be a real value or inf"
                ));
                continue;
            }
            None => {
                errors.push(format!("interferers[{i}].cir_db must be a number"));
                continue;
            }
        };
        let offset = match t.get("freq_offset_hz") {
            None => match kind {
                InterfererKind::CoChannel => 0.0,
                InterfererKind::AdjacentChannel => 1.25 * symbol_rate_hz,
            },
            Some(v) => match as_number(v) {
                Some(f) if f.is_finite() => f,
                _ => {
                    errors.push(format!(
                        "interferers[{i}].freq_offset_hz must be a finite number"
                    ));
                    continue;
                }
            },
        };
        match kind {
            InterfererKind::CoChannel if offset != 0.0 => {
                errors.push(format!(
                    "interferers[{i}].freq_offset_hz must be 0 for a co_channel interferer"
                ));
                continue;
            }
            InterfererKind::AdjacentChannel if offset == 0.0 => {
                errors.push(format!(
                    "interferers[{i}].freq_offset_hz must be nonzero for an adjacent_channel interferer"
                ));
                continue;
            }
            _ => {}
        }
        let modulation = match t.get("modulation") {
            None => 4,
            Some(v) => match parse_modulation_order(v, &format!("interferers[{i}].modulation"), errors) {
                Some(m) => m,
                None => continue,
            },
        };
        let post_channel = match t.get("post_channel") {
            None => false,
            Some(Value::Boolean(b)) => *b,
            Some(_) => {
                errors.push(format!("interferers[{i}].post_channel must be a boolean"));
                continue;
            }
        };
        out.push(InterfererSetting {
            kind,
            cir_db,
            freq_offset_hz: offset,
            modulation,
            post_channel,
        });
    }
    out
}

fn parse_equalizer(t: &toml::Table, errors: &mut Vec<String>) -> Option<LmsConfig> {
    check_unknown_keys(
        t,
        &["num_taps", "step_size", "training_len", "reference_delay_symbols"],
        "equalizer",
        errors,
    );
    let mut ok = true;
    let num_taps = match t.get("num_taps").and_then(as_integer) {
        Some(n) if n >= 1 && n % 2 == 1 => n as usize,
        _ => {
            errors.push("equalizer.num_taps must be a positive odd integer".to_string());
            ok = false;
            1
        }
    };
    let step_size = match t.get("step_size").and_then(as_number) {
        Some(s) if s.is_finite() && s >= 0.0 => s,
        _ => {
            errors.push("equalizer.step_size must be a finite number >= 0".to_string());
            ok = false;
            0.0
        }
    };
    let training_len = match t.get("training_len") {
        None => 0,
        Some(v) => match as_integer(v) {
            Some(n) if n >= 0 => n as usize,
            _ => {
                errors.push("equalizer.training_len must be a nonnegative integer".to_string());
                ok = false;
                0
            }
        },
    };
    let delay = match t.get("reference_delay_symbols") {
        None => 0,
        Some(v) => match as_integer(v) {
            Some(n) if n >= 0 => n as usize,
            _ => {
                errors.push(
                    "equalizer.reference_delay_symbols must be a nonnegative integer".to_string(),
                );
                ok = false;
                0
            }
        },
    };
    if !ok {
        return None;
    }
    LmsConfig::new(num_taps, step_size, training_len, delay).ok()
}

/// Parse and validate scenario text. On failure every violation found is
/// returned, not just the first.
pub fn validate_config(raw: &str) -> Result<ScenarioConfig, Vec<String>> {
    let table: toml::Table = match raw.parse() {
        Ok(t) => t,
        Err(e) => return Err(vec![format!("config is not valid TOML: {e}")]),
    };
    let mut cfg = ScenarioConfig::default();
    let mut w = Walker {
        table: &table,
        errors: Vec::new(),
    };
    check_unknown_keys(&table, KNOWN_KEYS, "", &mut w.errors);

    if let Some(v) = table.get("name") {
        match v.as_str() {
            Some(s) if !s.is_empty() => cfg.name = s.to_string(),
            _ => w.err("name must be a non-empty string"),
        }
    }

    if let Some(v) = table.get("modulations") {
        match v.as_array() {
            Some(list) if !list.is_empty() => {
                let mut mods = Vec::new();
                for (i, item) in list.iter().enumerate() {
                    if let Some(m) =
                        parse_modulation_order(item, &format!("modulations[{i}]"), &mut w.errors)
                    {
                        mods.push(m);
                    }
                }
                if !mods.is_empty() {
                    cfg.modulations = mods;
                }
            }
            _ => w.err("modulations must be a non-empty list of constellation orders"),
        }
    }

    if let Some(v) = table.get("channel") {
        let parse_one = |item: &Value, label: &str, errors: &mut Vec<String>| match item
            .as_str()
            .and_then(ChannelKind::parse)
        {
            Some(c) => Some(c),
            None => {
                errors.push(format!(
                    "{label} must be \"awgn\", \"rayleigh\", or \"rayleigh_plus_awgn\""
                ));
                None
            }
        };
        match v {
            Value::String(_) => {
                if let Some(c) = parse_one(v, "channel", &mut w.errors) {
                    cfg.channels = vec![c];
                }
            }
            Value::Array(list) if !list.is_empty() => {
                let mut chans = Vec::new();
                for (i, item) in list.iter().enumerate() {
                    if let Some(c) = parse_one(item, &format!("channel[{i}]"), &mut w.errors) {
                        chans.push(c);
                    }
                }
                if !chans.is_empty() {
                    cfg.channels = chans;
                }
            }
            _ => w.err("channel must be \"awgn\", \"rayleigh\", or \"rayleigh_plus_awgn\""),
        }
    }

    if let Some(v) = table.get("esn0_db_list") {
        match v.as_array() {
            Some(list) if !list.is_empty() => {
                let mut vals = Vec::new();
                for (i, item) in list.iter().enumerate() {
                    match as_number(item) {
                        Some(x) if !x.is_nan() && x != f64::NEG_INFINITY => vals.push(x),
                        _ => w.err(format!(
                            "esn0_db_list[{i}] must be a real value or inf"
                        )),
                    }
                }
                if !vals.is_empty() {
                    cfg.esn0_db_list = vals;
                }
            }
            _ => w.err("esn0_db_list must be a non-empty list of numbers"),
        }
    }

    if let Some(x) = w.number("doppler_hz", "doppler_hz must be a positive number") {
        if x.is_finite() && x > 0.0 {
            cfg.doppler_hz = x;
        } else {
            w.err("doppler_hz must be a positive number");
        }
    }

    if let Some(x) = w.number("rolloff", "rolloff must be in (0,1]") {
        if x > 0.0 && x <= 1.0 {
            cfg.rolloff = x;
        } else {
            w.err("rolloff must be in (0,1]");
        }
    }

    if let Some(n) = w.integer(
        "samples_per_symbol",
        "samples_per_symbol must be an integer >= 2",
    ) {
        if n >= 2 {
            cfg.samples_per_symbol = n as usize;
        } else {
            w.err("samples_per_symbol must be an integer >= 2");
        }
    }

    if let Some(n) = w.integer(
        "filter_span_symbols",
        "filter_span_symbols must be a positive even integer",
    ) {
        if n > 0 && n % 2 == 0 {
            cfg.filter_span_symbols = n as usize;
        } else {
            w.err("filter_span_symbols must be a positive even integer");
        }
    }

    if let Some(x) = w.number("symbol_rate_hz", "symbol_rate_hz must be a positive number") {
        if x.is_finite() && x > 0.0 {
            cfg.symbol_rate_hz = x;
        } else {
            w.err("symbol_rate_hz must be a positive number");
        }
    }

    if let Some(v) = table.get("paths") {
        match v.as_array() {
            Some(list) => cfg.paths = parse_paths(list, &mut w.errors),
            None => w.err("paths must be a list of tables"),
        }
    }

    if let Some(v) = table.get("interferers") {
        match v.as_array() {
            Some(list) => {
                cfg.interferers = parse_interferers(list, cfg.symbol_rate_hz, &mut w.errors)
            }
            None => w.err("interferers must be a list of tables"),
        }
    }

    if let Some(v) = table.get("equalizer") {
        match v.as_table() {
            Some(t) => cfg.equalizer = parse_equalizer(t, &mut w.errors),
            None => w.err("equalizer must be a table"),
        }
    }

    if let Some(n) = w.integer("num_bits", "num_bits must be a positive integer") {
        if n > 0 {
            cfg.num_bits = n as u64;
        } else {
            w.err("num_bits must be a positive integer");
        }
    }

    if let Some(n) = w.integer("master_seed", "master_seed must be a nonnegative integer") {
        if n >= 0 {
            cfg.master_seed = n as u64;
        } else {
            w.err("master_seed must be a nonnegative integer");
        }
    }

    if let Some(v) = table.get("outputs") {
        match v.as_array() {
            Some(list) => {
                let mut set = OutputSet::default();
                for item in list {
                    match item.as_str() {
                        Some("ber") => set.ber = true,
                        Some("psd_tx") => set.psd_tx = true,
                        Some("psd_rx") => set.psd_rx = true,
                        Some("constellation") => set.constellation = true,
                        Some(other) => w.err(format!("unknown output \"{other}\"")),
                        None => w.err("outputs entries must be strings"),
                    }
                }
                cfg.outputs = set;
            }
            None => w.err("outputs must be a list of output names"),
        }
    }

    if let Some(n) = w.integer("psd_segment_len", "psd_segment_len must be an integer >= 16") {
        if n >= 16 {
            cfg.psd_segment_len = n as usize;
        } else {
            w.err("psd_segment_len must be an integer >= 16");
        }
    }

    if let Some(n) = w.integer(
        "constellation_max_points",
        "constellation_max_points must be a positive integer",
    ) {
        if n > 0 {
            cfg.constellation_max_points = n as usize;
        } else {
            w.err("constellation_max_points must be a positive integer");
        }
    }

    // Cross-field checks on whatever resolved successfully.
    if cfg.channels.iter().any(|c| c.uses_fading()) {
        let fs = cfg.sample_rate_hz();
        if cfg.doppler_hz >= fs / 10.0 {
            w.err(format!(
                "doppler_hz must be below sample_rate/10 ({} Hz)",
                fs / 10.0
            ));
        }
    }
    if w.errors.is_empty() {
        Ok(cfg)
    } else {
        Err(w.errors)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_echoes_all_defaults() {
        let cfg = validate_config("").unwrap();
        assert_eq!(cfg, ScenarioConfig::default());
        let text = cfg.describe();
        for key in KNOWN_KEYS {
            assert!(text.contains(key), "describe() missing {key}");
        }
    }

    #[test]
    fn out_of_range_rolloff_message_is_exact() {
        let err = validate_config("rolloff = 1.5").unwrap_err();
        assert_eq!(err, vec!["rolloff must be in (0,1]".to_string()]);
    }

    #[test]
    fn unknown_key_is_named() {
        let err = validate_config("dopler_hz = 10.0").unwrap_err();
        assert_eq!(err, vec!["unknown key \"dopler_hz\"".to_string()]);
    }

    #[test]
    fn all_violations_reported_together() {
        let raw = "rolloff = -0.1\nnum_bits = 0\ndopler_hz = 5\nmodulations = [3]\n";
        let err = validate_config(raw).unwrap_err();
        assert_eq!(err.len(), 4, "{err:?}");
        assert!(err.iter().any(|e| e == "rolloff must be in (0,1]"));
        assert!(err.iter().any(|e| e == "num_bits must be a positive integer"));
        assert!(err.iter().any(|e| e == "unknown key \"dopler_hz\""));
        assert!(err.iter().any(|e| e == "modulations[0] must be a power of two >= 2"));
    }

    #[test]
    fn channel_accepts_scalar_and_list() {
        let one = validate_config("channel = \"rayleigh\"").unwrap();
        assert_eq!(one.channels, vec![ChannelKind::Rayleigh]);
        let two = validate_config("channel = [\"awgn\", \"rayleigh\"]").unwrap();
        assert_eq!(
            two.channels,
            vec![ChannelKind::Awgn, ChannelKind::Rayleigh]
        );
        let bad = validate_config("channel = \"rician\"").unwrap_err();
        assert!(bad[0].contains("rayleigh_plus_awgn"));
    }

    #[test]
    fn interferer_offsets_follow_kind() {
        let raw = "symbol_rate_hz = 1e4\n[[interferers]]\nkind = \"adjacent_channel\"\ncir_db = 12.0\n";
        let cfg = validate_config(raw).unwrap();
        assert_eq!(cfg.interferers[0].freq_offset_hz, 12_500.0);
        let raw_co = "[[interferers]]\nkind = \"co_channel\"\ncir_db = inf\n";
        let cfg_co = validate_config(raw_co).unwrap();
        assert_eq!(cfg_co.interferers[0].cir_db, f64::INFINITY);
        assert_eq!(cfg_co.interferers[0].freq_offset_hz, 0.0);
        let bad = "[[interferers]]\nkind = \"co_channel\"\ncir_db = 3.0\nfreq_offset_hz = 100.0\n";
        let err = validate_config(bad).unwrap_err();
        assert!(err[0].contains("must be 0 for a co_channel"));
    }

    #[test]
    fn nested_unknown_keys_are_reported_with_path() {
        let raw = "[equalizer]\nnum_taps = 5\nstep_size = 0.01\nmu = 0.5\n";
        let err = validate_config(raw).unwrap_err();
        assert_eq!(err, vec!["unknown key \"equalizer.mu\"".to_string()]);
    }

    #[test]
    fn equalizer_parses_into_core_config() {
        let raw = "[equalizer]\nnum_taps = 9\nstep_size = 0.02\ntraining_len = 500\nreference_delay_symbols = 4\n";
        let cfg = validate_config(raw).unwrap();
        let eq = cfg.equalizer.unwrap();
        assert_eq!(eq.num_taps(), 9);
        assert_eq!(eq.step_size(), 0.02);
        assert_eq!(eq.training_len(), 500);
        assert_eq!(eq.reference_delay_symbols(), 4);
    }

    #[test]
    fn multipath_profile_rules() {
        let good = "paths = [{ delay_samples = 0, avg_gain_db = 0.0 }, { delay_samples = 3, avg_gain_db = -3.0 }]";
        let cfg = validate_config(good).unwrap();
        assert_eq!(cfg.paths.len(), 2);
        let bad = "paths = [{ delay_samples = 1, avg_gain_db = 0.0 }]";
        let err = validate_config(bad).unwrap_err();
        assert_eq!(err, vec!["paths[0].delay_samples must be 0".to_string()]);
    }

    #[test]
    fn fading_doppler_bound_uses_sample_rate() {
        let raw = "channel = \"rayleigh\"\nsymbol_rate_hz = 100.0\ndoppler_hz = 90.0\n";
        let err = validate_config(raw).unwrap_err();
        assert!(err[0].starts_with("doppler_hz must be below sample_rate/10"));
    }

    #[test]
    fn infinite_esn0_is_accepted() {
        let cfg = validate_config("esn0_db_list = [inf]").unwrap();
        assert_eq!(cfg.esn0_db_list, vec![f64::INFINITY]);
    }
}
