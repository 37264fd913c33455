//! Scenario presets compiled into the binary. `run` resolves a config
//! argument against these names when no such file exists on disk.

pub const PRESETS: &[(&str, &str)] = &[
    ("fig2-4_psd.cfg", include_str!("../presets/fig2-4_psd.cfg")),
    (
        "fig5-7_constellation.cfg",
        include_str!("../presets/fig5-7_constellation.cfg"),
    ),
    ("fig8-10_rx.cfg", include_str!("../presets/fig8-10_rx.cfg")),
    ("fig11_ber.cfg", include_str!("../presets/fig11_ber.cfg")),
    ("fig12_doppler.cfg", include_str!("../presets/fig12_doppler.cfg")),
];

/// Look up a preset by filename, with or without the `.cfg` suffix.
pub fn find(name: &str) -> Option<&'static str> {
    PRESETS
        .iter()
        .find(|(n, _)| *n == name || n.strip_suffix(".cfg") == Some(name))
        .map(|(_, text)| *text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::validate_config;

    #[test]
    fn every_preset_validates() {
        for (name, text) in PRESETS {
            let cfg = validate_config(text)
                .unwrap_or_else(|e| panic!("preset {name} invalid: {e:?}"));
            assert_eq!(format!("{}.cfg", cfg.name), *name);
        }
    }

    #[test]
    fn presets_cover_the_reference_operating_points() {
        let mut dopplers = Vec::new();
        let mut esn0s = Vec::new();
        for (_, text) in PRESETS {
            let cfg = validate_config(text).unwrap();
            assert_eq!(cfg.rolloff, 0.22);
            assert_eq!(cfg.samples_per_symbol, 8);
            dopplers.push(cfg.doppler_hz);
            esn0s.extend(cfg.esn0_db_list.iter().copied());
        }
        assert!(dopplers.contains(&10.0) && dopplers.contains(&15.0));
        assert!(esn0s.contains(&30.0) && esn0s.contains(&10.0));
    }

    #[test]
    fn lookup_accepts_bare_and_suffixed_names() {
        assert!(find("fig11_ber").is_some());
        assert!(find("fig11_ber.cfg").is_some());
        assert!(find("fig99").is_none());
    }
}
