//! Flat `key = value` configuration files.
//!
//! One assignment per line, `#` starts a comment, blank lines are ignored.
//! Keys are the [`Scenario`](crate::Scenario) field names plus the sweep keys `power_axis`
//! and `element_axis` (comma-separated lists) and `mode`. Omitted keys keep
//! their defaults. Unknown or repeated keys are errors that carry the line
//! number.

use std::path::Path;

use crate::error::{Error, Result};
use crate::scenario::SCENARIO_KEYS;
use crate::sweep::{Mode, SweepSpec};

pub const SWEEP_KEYS: &[&str] = &["power_axis", "element_axis", "mode"];

fn parse_list<T: std::str::FromStr>(v: &str, what: &str) -> std::result::Result<Vec<T>, String> {
    let items: std::result::Result<Vec<T>, String> = v
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| format!("bad {what} entry `{s}`")))
        .collect();
    let items = items?;
    if items.is_empty() {
        return Err(format!("{what} must list at least one value"));
    }
    Ok(items)
}

/// Applies one assignment to a sweep spec (scenario keys land in `base`).
pub fn apply(spec: &mut SweepSpec, key: &str, value: &str) -> std::result::Result<(), String> {
    let value = value.trim();
    match key {
        "power_axis" => {
            let powers: Vec<f64> = parse_list(value, "power_axis")?;
            if powers.iter().any(|p| !p.is_finite()) {
                return Err("power_axis entries must be finite".into());
            }
            spec.power_axis = powers;
        }
        "element_axis" => spec.element_axis = parse_list(value, "element_axis")?,
        "mode" => spec.mode = value.parse::<Mode>()?,
        _ => spec.base.set(key, value)?,
    }
    Ok(())
}

pub fn is_known_key(key: &str) -> bool {
    SCENARIO_KEYS.contains(&key) || SWEEP_KEYS.contains(&key)
}

/// Parses a config document on top of `spec`. `origin` names the document
/// in error locations (usually the file path).
pub fn parse_into(spec: &mut SweepSpec, text: &str, origin: &str) -> Result<()> {
    let mut seen: Vec<(String, usize)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let err = |message: String| Error::Config {
            location: format!("{origin}:{line_no}"),
            message,
        };
        let line = raw.split_once('#').map_or(raw, |(before, _)| before).trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| err(format!("expected `key = value`, got `{line}`")))?;
        let key = key.trim();
        if !is_known_key(key) {
            return Err(err(format!("unknown key `{key}`")));
        }
        if let Some((_, first)) = seen.iter().find(|(k, _)| k == key) {
            return Err(err(format!("key `{key}` already set on line {first}")));
        }
        seen.push((key.to_string(), line_no));
        apply(spec, key, value).map_err(err)?;
    }
    Ok(())
}

pub fn parse_str(text: &str, origin: &str) -> Result<SweepSpec> {
    let mut spec = SweepSpec::default();
    parse_into(&mut spec, text, origin)?;
    Ok(spec)
}

pub fn load(path: &Path) -> Result<SweepSpec> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Config {
        location: path.display().to_string(),
        message: format!("cannot read config: {e}"),
    })?;
    parse_str(&text, &path.display().to_string())
}

/// Applies `key=value` overrides in order; later ones win.
pub fn apply_overrides(spec: &mut SweepSpec, overrides: &[String]) -> Result<()> {
    for (i, ov) in overrides.iter().enumerate() {
        let err = |message: String| Error::Config {
            location: format!("--set #{}", i + 1),
            message,
        };
        let (key, value) = ov
            .split_once('=')
            .ok_or_else(|| err(format!("expected key=value, got `{ov}`")))?;
        let key = key.trim();
        if !is_known_key(key) {
            return Err(err(format!("unknown key `{key}`")));
        }
        apply(spec, key, value).map_err(err)?;
    }
    Ok(())
}

/// Renders the effective configuration in config-file syntax.
pub fn render(spec: &SweepSpec) -> String {
    let mut out = String::new();
    for (k, v) in spec.base.entries() {
        out.push_str(&format!("{k} = {v}\n"));
    }
    let powers: Vec<String> = spec.power_axis.iter().map(f64::to_string).collect();
    let elements: Vec<String> = spec.element_axis.iter().map(u32::to_string).collect();
    out.push_str(&format!("power_axis = {}\n", powers.join(",")));
    out.push_str(&format!("element_axis = {}\n", elements.join(",")));
    out.push_str(&format!("mode = {}\n", spec.mode));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document_gives_defaults() {
        assert_eq!(parse_str("", "cfg").unwrap(), SweepSpec::default());
        assert_eq!(parse_str("# nothing\n\n   \n", "cfg").unwrap(), SweepSpec::default());
    }

    #[test]
    fn values_and_comments() {
        let spec = parse_str(
            "tx_power_dbw = 9   # full power\nelement_axis = 1, 4\nmode = radar_monostatic\npower_axis=2.5\n",
            "cfg",
        )
        .unwrap();
        assert_eq!(spec.base.tx_power_dbw, 9.0);
        assert_eq!(spec.element_axis, vec![1, 4]);
        assert_eq!(spec.power_axis, vec![2.5]);
        assert_eq!(spec.mode, Mode::RadarMonostatic);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = parse_str("tx_power_dbw = 3\n\nbogus_key = 1\n", "cfg").unwrap_err();
        let msg = e.to_string();
        assert!(e.is_config());
        assert!(msg.starts_with("cfg:3:") && msg.contains("bogus_key"), "{msg}");

        let e = parse_str("rcs_m2 = big\n", "cfg").unwrap_err();
        assert!(e.to_string().starts_with("cfg:1:"));

        let e = parse_str("just words\n", "cfg").unwrap_err();
        assert!(e.to_string().starts_with("cfg:1:"));

        let e = parse_str("mode = all\nmode = comm\n", "cfg").unwrap_err();
        assert!(e.to_string().contains("line 1"));

        assert!(parse_str("element_axis = \n", "cfg").is_err());
        assert!(parse_str("element_axis = 1,x\n", "cfg").is_err());
        assert!(parse_str("power_axis = 1,inf\n", "cfg").is_err());
    }

    #[test]
    fn overrides_beat_file_values() {
        let mut spec = parse_str("tx_power_dbw = 3\n", "cfg").unwrap();
        apply_overrides(&mut spec, &["tx_power_dbw=9".into(), "n_elements=4".into()]).unwrap();
        assert_eq!(spec.base.tx_power_dbw, 9.0);
        assert_eq!(spec.base.n_elements, 4);
        let e = apply_overrides(&mut spec, &["bogus_key=1".into()]).unwrap_err();
        assert!(e.is_config() && e.to_string().contains("bogus_key"));
        assert!(apply_overrides(&mut spec, &["novalue".into()]).is_err());
    }

    #[test]
    fn render_parses_back() {
        let mut spec = SweepSpec::default();
        apply_overrides(
            &mut spec,
            &["tx_power_dbw=4.5".into(), "mode=all".into(), "element_axis=3,5".into()],
        )
        .unwrap();
        assert_eq!(parse_str(&render(&spec), "rendered").unwrap(), spec);
    }
}
