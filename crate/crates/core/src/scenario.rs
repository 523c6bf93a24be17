//! Parameter set for one link evaluation.
//!
//! Every field is addressable by its lower_snake_case name, which is also
//! the key used in config files and `--set key=value` overrides. Units are
//! part of the name.

use std::fmt;
use std::str::FromStr;

use crate::error::{ensure_finite, ensure_positive, Error, Result};
use crate::waveform::TonePlacement;

/// How transmit gain grows with the number of array elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ArrayGainModel {
    /// Total radiated power held fixed: `+10·log10(N/N_ref)`.
    #[default]
    FixedTotalPower,
    /// Every element brings its own power amplifier: `+20·log10(N/N_ref)`.
    PerElementPower,
}

impl ArrayGainModel {
    pub fn as_str(self) -> &'static str {
        match self {
            ArrayGainModel::FixedTotalPower => "fixed_total_power",
            ArrayGainModel::PerElementPower => "per_element_power",
        }
    }

    /// dB per decade of element-count ratio.
    pub fn db_per_decade(self) -> f64 {
        match self {
            ArrayGainModel::FixedTotalPower => 10.0,
            ArrayGainModel::PerElementPower => 20.0,
        }
    }
}

impl fmt::Display for ArrayGainModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ArrayGainModel {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "fixed_total_power" => Ok(ArrayGainModel::FixedTotalPower),
            "per_element_power" => Ok(ArrayGainModel::PerElementPower),
            other => Err(format!(
                "unknown array gain model `{other}` (expected fixed_total_power or per_element_power)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub carrier_hz: f64,
    pub bandwidth_hz: f64,
    pub n_subcarriers: usize,
    pub n_data: usize,
    pub n_sense: usize,
    pub n_cp: usize,
    pub tx_power_dbw: f64,
    /// Gain of the reference array (`n_elements_ref` elements).
    pub tx_gain_ref_dbi: f64,
    /// User-terminal receive gain on the communications leg.
    pub rx_gain_dbi: f64,
    /// Ground radar-receiver gain on the bistatic sensing leg.
    pub radar_rx_gain_dbi: f64,
    pub n_elements: u32,
    pub n_elements_ref: u32,
    pub array_gain_model: ArrayGainModel,
    pub d_sat_user_km: f64,
    pub d_sat_target_km: f64,
    pub d_target_rx_km: f64,
    pub rcs_m2: f64,
    pub t_integration_s: f64,
    pub noise_temp_k: f64,
    pub elevation_user_deg: f64,
    pub elevation_target_deg: f64,
    pub doppler_precompensated: bool,
    pub detection_threshold_db: f64,
    pub tone_placement: TonePlacement,
    /// Charge the cyclic prefix against the achievable rate.
    pub rate_cp_overhead: bool,
    /// Count only data subcarriers towards the achievable rate.
    pub rate_subcarrier_overhead: bool,
}

impl Default for Scenario {
    /// The LEO C-band case study: 4.2 GHz, 100 MHz OFDM with 1024
    /// subcarriers (800 data, 224 sensing, 72-sample prefix), 500 km user
    /// link, 490 km + 10 km bistatic path to a 100 m² aircraft.
    fn default() -> Self {
        Scenario {
            carrier_hz: 4.2e9,
            bandwidth_hz: 1e8,
            n_subcarriers: 1024,
            n_data: 800,
            n_sense: 224,
            n_cp: 72,
            tx_power_dbw: 1.0,
            tx_gain_ref_dbi: 22.81,
            rx_gain_dbi: 32.85,
            radar_rx_gain_dbi: 32.85,
            n_elements: 1,
            n_elements_ref: 1,
            array_gain_model: ArrayGainModel::FixedTotalPower,
            d_sat_user_km: 500.0,
            d_sat_target_km: 490.0,
            d_target_rx_km: 10.0,
            rcs_m2: 100.0,
            t_integration_s: 0.3,
            noise_temp_k: 300.0,
            elevation_user_deg: 10.0,
            elevation_target_deg: 30.0,
            doppler_precompensated: true,
            detection_threshold_db: 10.0,
            tone_placement: TonePlacement::CombUniform,
            rate_cp_overhead: true,
            rate_subcarrier_overhead: true,
        }
    }
}

/// Every key accepted by [`Scenario::set`], in canonical order.
pub const SCENARIO_KEYS: &[&str] = &[
    "carrier_hz",
    "bandwidth_hz",
    "n_subcarriers",
    "n_data",
    "n_sense",
    "n_cp",
    "tx_power_dbw",
    "tx_gain_ref_dbi",
    "rx_gain_dbi",
    "radar_rx_gain_dbi",
    "n_elements",
    "n_elements_ref",
    "array_gain_model",
    "d_sat_user_km",
    "d_sat_target_km",
    "d_target_rx_km",
    "rcs_m2",
    "t_integration_s",
    "noise_temp_k",
    "elevation_user_deg",
    "elevation_target_deg",
    "doppler_precompensated",
    "detection_threshold_db",
    "tone_placement",
    "rate_cp_overhead",
    "rate_subcarrier_overhead",
];

fn parse_f64(v: &str) -> std::result::Result<f64, String> {
    let x: f64 = v
        .parse()
        .map_err(|_| format!("expected a number, got `{v}`"))?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(format!("expected a finite number, got `{v}`"))
    }
}

fn parse_count<T: FromStr>(v: &str) -> std::result::Result<T, String> {
    v.parse()
        .map_err(|_| format!("expected a non-negative integer, got `{v}`"))
}

fn parse_bool(v: &str) -> std::result::Result<bool, String> {
    match v {
        "true" | "1" | "yes" | "on" => Ok(true),
        "false" | "0" | "no" | "off" => Ok(false),
        _ => Err(format!("expected true or false, got `{v}`")),
    }
}

impl Scenario {
    /// Assigns one field from its textual form. The error names the problem
    /// but not the location; callers attach that.
    pub fn set(&mut self, key: &str, value: &str) -> std::result::Result<(), String> {
        let v = value.trim();
        match key {
            "carrier_hz" => self.carrier_hz = parse_f64(v)?,
            "bandwidth_hz" => self.bandwidth_hz = parse_f64(v)?,
            "n_subcarriers" => self.n_subcarriers = parse_count(v)?,
            "n_data" => self.n_data = parse_count(v)?,
            "n_sense" => self.n_sense = parse_count(v)?,
            "n_cp" => self.n_cp = parse_count(v)?,
            "tx_power_dbw" => self.tx_power_dbw = parse_f64(v)?,
            "tx_gain_ref_dbi" => self.tx_gain_ref_dbi = parse_f64(v)?,
            "rx_gain_dbi" => self.rx_gain_dbi = parse_f64(v)?,
            "radar_rx_gain_dbi" => self.radar_rx_gain_dbi = parse_f64(v)?,
            "n_elements" => self.n_elements = parse_count(v)?,
            "n_elements_ref" => self.n_elements_ref = parse_count(v)?,
            "array_gain_model" => self.array_gain_model = v.parse()?,
            "d_sat_user_km" => self.d_sat_user_km = parse_f64(v)?,
            "d_sat_target_km" => self.d_sat_target_km = parse_f64(v)?,
            "d_target_rx_km" => self.d_target_rx_km = parse_f64(v)?,
            "rcs_m2" => self.rcs_m2 = parse_f64(v)?,
            "t_integration_s" => self.t_integration_s = parse_f64(v)?,
            "noise_temp_k" => self.noise_temp_k = parse_f64(v)?,
            "elevation_user_deg" => self.elevation_user_deg = parse_f64(v)?,
            "elevation_target_deg" => self.elevation_target_deg = parse_f64(v)?,
            "doppler_precompensated" => self.doppler_precompensated = parse_bool(v)?,
            "detection_threshold_db" => self.detection_threshold_db = parse_f64(v)?,
            "tone_placement" => self.tone_placement = v.parse()?,
            "rate_cp_overhead" => self.rate_cp_overhead = parse_bool(v)?,
            "rate_subcarrier_overhead" => self.rate_subcarrier_overhead = parse_bool(v)?,
            _ => return Err(format!("unknown key `{key}`")),
        }
        Ok(())
    }

    /// `(key, value)` for every field, in [`SCENARIO_KEYS`] order. Floats
    /// use the shortest text that parses back to the same value.
    pub fn entries(&self) -> Vec<(&'static str, String)> {
        vec![
            ("carrier_hz", self.carrier_hz.to_string()),
            ("bandwidth_hz", self.bandwidth_hz.to_string()),
            ("n_subcarriers", self.n_subcarriers.to_string()),
            ("n_data", self.n_data.to_string()),
            ("n_sense", self.n_sense.to_string()),
            ("n_cp", self.n_cp.to_string()),
            ("tx_power_dbw", self.tx_power_dbw.to_string()),
            ("tx_gain_ref_dbi", self.tx_gain_ref_dbi.to_string()),
            ("rx_gain_dbi", self.rx_gain_dbi.to_string()),
            ("radar_rx_gain_dbi", self.radar_rx_gain_dbi.to_string()),
            ("n_elements", self.n_elements.to_string()),
            ("n_elements_ref", self.n_elements_ref.to_string()),
            ("array_gain_model", self.array_gain_model.to_string()),
            ("d_sat_user_km", self.d_sat_user_km.to_string()),
            ("d_sat_target_km", self.d_sat_target_km.to_string()),
            ("d_target_rx_km", self.d_target_rx_km.to_string()),
            ("rcs_m2", self.rcs_m2.to_string()),
            ("t_integration_s", self.t_integration_s.to_string()),
            ("noise_temp_k", self.noise_temp_k.to_string()),
            ("elevation_user_deg", self.elevation_user_deg.to_string()),
            ("elevation_target_deg", self.elevation_target_deg.to_string()),
            ("doppler_precompensated", self.doppler_precompensated.to_string()),
            ("detection_threshold_db", self.detection_threshold_db.to_string()),
            ("tone_placement", self.tone_placement.to_string()),
            ("rate_cp_overhead", self.rate_cp_overhead.to_string()),
            ("rate_subcarrier_overhead", self.rate_subcarrier_overhead.to_string()),
        ]
    }

    pub fn get(&self, key: &str) -> Option<String> {
        self.entries()
            .into_iter()
            .find(|(k, _)| *k == key)
            .map(|(_, v)| v)
    }

    /// Checks the physical invariants. Every error names the offending key.
    pub fn validate(&self) -> Result<()> {
        ensure_positive("carrier_hz", self.carrier_hz)?;
        ensure_positive("bandwidth_hz", self.bandwidth_hz)?;
        ensure_finite("tx_power_dbw", self.tx_power_dbw)?;
        ensure_finite("tx_gain_ref_dbi", self.tx_gain_ref_dbi)?;
        ensure_finite("rx_gain_dbi", self.rx_gain_dbi)?;
        ensure_finite("radar_rx_gain_dbi", self.radar_rx_gain_dbi)?;
        ensure_finite("detection_threshold_db", self.detection_threshold_db)?;
        ensure_positive("d_sat_user_km", self.d_sat_user_km)?;
        ensure_positive("d_sat_target_km", self.d_sat_target_km)?;
        ensure_positive("d_target_rx_km", self.d_target_rx_km)?;
        ensure_positive("rcs_m2", self.rcs_m2)?;
        ensure_positive("noise_temp_k", self.noise_temp_k)?;
        if !(self.t_integration_s.is_finite() && self.t_integration_s >= 0.0) {
            return Err(Error::domain("t_integration_s", "must be finite and >= 0"));
        }
        for (key, e) in [
            ("elevation_user_deg", self.elevation_user_deg),
            ("elevation_target_deg", self.elevation_target_deg),
        ] {
            if !(0.0..=90.0).contains(&e) {
                return Err(Error::domain(key, format!("must lie in [0, 90], got {e}")));
            }
        }
        if self.n_subcarriers == 0 {
            return Err(Error::domain("n_subcarriers", "must be at least 1"));
        }
        if self.n_elements == 0 {
            return Err(Error::domain("n_elements", "must be at least 1"));
        }
        if self.n_elements_ref == 0 {
            return Err(Error::domain("n_elements_ref", "must be at least 1"));
        }
        if self.n_data + self.n_sense > self.n_subcarriers {
            return Err(Error::PartitionOverflow {
                n_total: self.n_subcarriers,
                n_data: self.n_data,
                n_sense: self.n_sense,
            });
        }
        if self.n_sense < 2 {
            return Err(Error::domain(
                "n_sense",
                format!("sensing needs at least 2 subcarriers, got {}", self.n_sense),
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys_and_entries_agree() {
        let s = Scenario::default();
        let keys: Vec<&str> = s.entries().iter().map(|(k, _)| *k).collect();
        assert_eq!(keys, SCENARIO_KEYS);
    }

    #[test]
    fn entries_round_trip_through_set() {
        let mut s = Scenario::default();
        s.tx_power_dbw = 7.3;
        s.n_elements = 16;
        s.tone_placement = TonePlacement::BlockEdge;
        s.array_gain_model = ArrayGainModel::PerElementPower;
        s.doppler_precompensated = false;
        s.carrier_hz = 0.1 + 0.2;
        let mut back = Scenario::default();
        for (k, v) in s.entries() {
            back.set(k, &v).unwrap();
        }
        assert_eq!(back, s);
    }

    #[test]
    fn set_rejects_unknown_and_malformed() {
        let mut s = Scenario::default();
        assert!(s.set("bogus_key", "1").unwrap_err().contains("bogus_key"));
        assert!(s.set("tx_power_dbw", "lots").is_err());
        assert!(s.set("tx_power_dbw", "inf").is_err());
        assert!(s.set("n_elements", "-2").is_err());
        assert!(s.set("doppler_precompensated", "maybe").is_err());
        assert!(s.set("tone_placement", "scatter").is_err());
    }

    #[test]
    fn defaults_validate() {
        Scenario::default().validate().unwrap();
    }

    #[test]
    fn validation_names_the_field() {
        let cases: Vec<(&str, &str)> = vec![
            ("d_sat_user_km", "0"),
            ("rcs_m2", "-1"),
            ("noise_temp_k", "0"),
            ("elevation_target_deg", "91"),
            ("n_elements", "0"),
            ("n_sense", "1"),
            ("carrier_hz", "-4.2e9"),
        ];
        for (k, v) in cases {
            let mut s = Scenario::default();
            s.set(k, v).unwrap();
            let err = s.validate().unwrap_err();
            assert!(err.to_string().contains(k), "{k}: {err}");
        }
        let mut s = Scenario::default();
        s.n_sense = 300;
        assert!(matches!(s.validate(), Err(Error::PartitionOverflow { .. })));
    }
}
