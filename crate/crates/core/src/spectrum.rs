//! Registry of satellite communication bands and spaceborne-radar
//! active-sensing allocations.
//!
//! The records ship as a pipe-delimited text file (`data/bands.txt`), one
//! record per line:
//!
//! ```text
//! service|band|low_hz|high_hz|notes
//! ```
//!
//! * `service` is `communications` or `active_sensing`.
//! * `band` is one of `L S C X Ku K Ka Q-V P W G`.
//! * `low_hz`, `high_hz` are integer Hz with `low_hz < high_hz`.
//! * `notes` holds the traditional applications for communication bands. For
//!   active-sensing rows it holds `sensor=bandwidth` pairs joined by `;`,
//!   with sensors drawn from `scatterometer`, `altimeter`, `sar`,
//!   `precipitation_radar`, `cloud_profile_radar`. Sensors without an
//!   assigned bandwidth are omitted.
//!
//! Lines starting with `#` are comments. [`Registry::to_text`] reproduces the
//! shipped file byte for byte.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{ensure_positive, Error, Result};

const BUILTIN_DB: &str = include_str!("../data/bands.txt");

const HEADER: &str = "# service|band|low_hz|high_hz|notes
# communications notes: traditional applications, free text
# active_sensing notes: sensor=bandwidth pairs separated by ';' (sensors: scatterometer, altimeter, sar, precipitation_radar, cloud_profile_radar)
";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Service {
    Communications,
    ActiveSensing,
}

impl Service {
    pub fn as_str(self) -> &'static str {
        match self {
            Service::Communications => "communications",
            Service::ActiveSensing => "active_sensing",
        }
    }
}

impl FromStr for Service {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "communications" => Ok(Service::Communications),
            "active_sensing" => Ok(Service::ActiveSensing),
            other => Err(format!("unknown service `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BandLetter {
    P,
    L,
    S,
    C,
    X,
    Ku,
    K,
    Ka,
    QV,
    W,
    G,
}

impl BandLetter {
    pub const ALL: [BandLetter; 11] = [
        BandLetter::P,
        BandLetter::L,
        BandLetter::S,
        BandLetter::C,
        BandLetter::X,
        BandLetter::Ku,
        BandLetter::K,
        BandLetter::Ka,
        BandLetter::QV,
        BandLetter::W,
        BandLetter::G,
    ];

    pub fn label(self) -> &'static str {
        match self {
            BandLetter::P => "P",
            BandLetter::L => "L",
            BandLetter::S => "S",
            BandLetter::C => "C",
            BandLetter::X => "X",
            BandLetter::Ku => "Ku",
            BandLetter::K => "K",
            BandLetter::Ka => "Ka",
            BandLetter::QV => "Q-V",
            BandLetter::W => "W",
            BandLetter::G => "G",
        }
    }

    /// Case-insensitive parse of a band label (`ku`, `Q-V`, ...).
    pub fn parse_loose(s: &str) -> Option<BandLetter> {
        let s = s.trim();
        let s = s
            .strip_suffix("-Band")
            .or_else(|| s.strip_suffix("-band"))
            .unwrap_or(s);
        Self::ALL
            .into_iter()
            .find(|b| b.label().eq_ignore_ascii_case(s))
    }
}

impl fmt::Display for BandLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for BandLetter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|b| b.label() == s)
            .ok_or_else(|| Error::UnknownBand(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sensor {
    Scatterometer,
    Altimeter,
    Sar,
    PrecipitationRadar,
    CloudProfileRadar,
}

impl Sensor {
    pub fn key(self) -> &'static str {
        match self {
            Sensor::Scatterometer => "scatterometer",
            Sensor::Altimeter => "altimeter",
            Sensor::Sar => "sar",
            Sensor::PrecipitationRadar => "precipitation_radar",
            Sensor::CloudProfileRadar => "cloud_profile_radar",
        }
    }

    fn from_key(s: &str) -> Option<Sensor> {
        [
            Sensor::Scatterometer,
            Sensor::Altimeter,
            Sensor::Sar,
            Sensor::PrecipitationRadar,
            Sensor::CloudProfileRadar,
        ]
        .into_iter()
        .find(|x| x.key() == s)
    }
}

/// One allocation row. Frequencies are exact integer Hz.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BandRecord {
    pub service: Service,
    pub band: BandLetter,
    pub low_hz: u64,
    pub high_hz: u64,
    /// Traditional applications; empty for active-sensing rows.
    pub applications: String,
    /// Assigned bandwidth per sensor, stored verbatim (e.g. `20-85 MHz`).
    /// `None` for communication rows.
    pub sensor_bandwidths: Option<BTreeMap<Sensor, String>>,
}

impl BandRecord {
    pub fn low_ghz(&self) -> f64 {
        self.low_hz as f64 / 1e9
    }

    pub fn high_ghz(&self) -> f64 {
        self.high_hz as f64 / 1e9
    }

    /// Closed-interval membership test, frequency in Hz.
    pub fn contains_hz(&self, freq_hz: f64) -> bool {
        self.low_hz as f64 <= freq_hz && freq_hz <= self.high_hz as f64
    }

    pub fn overlaps_hz(&self, low_hz: f64, high_hz: f64) -> bool {
        self.low_hz as f64 <= high_hz && low_hz <= self.high_hz as f64
    }

    /// Human label, `C-Band 3.4–7.025 GHz` or `C 5250–5570 MHz`.
    pub fn describe(&self) -> String {
        match self.service {
            Service::Communications => format!(
                "{}-Band {}–{} GHz",
                self.band,
                self.low_ghz(),
                self.high_ghz()
            ),
            Service::ActiveSensing => {
                if self.low_hz < 10_000_000_000 {
                    format!(
                        "{} {}–{} MHz",
                        self.band,
                        self.low_hz as f64 / 1e6,
                        self.high_hz as f64 / 1e6
                    )
                } else {
                    format!("{} {}–{} GHz", self.band, self.low_ghz(), self.high_ghz())
                }
            }
        }
    }

    fn notes(&self) -> String {
        match &self.sensor_bandwidths {
            None => self.applications.clone(),
            Some(map) => map
                .iter()
                .map(|(s, bw)| format!("{}={}", s.key(), bw))
                .collect::<Vec<_>>()
                .join(";"),
        }
    }

    fn to_line(&self) -> String {
        format!(
            "{}|{}|{}|{}|{}",
            self.service.as_str(),
            self.band,
            self.low_hz,
            self.high_hz,
            self.notes()
        )
    }

    fn parse_line(line: &str, line_no: usize) -> Result<BandRecord> {
        let bad = |message: String| Error::BandDatabase {
            line: line_no,
            message,
        };
        let fields: Vec<&str> = line.split('|').collect();
        if fields.len() != 5 {
            return Err(bad(format!("expected 5 fields, found {}", fields.len())));
        }
        let service: Service = fields[0].parse().map_err(bad)?;
        let band: BandLetter = fields[1]
            .parse()
            .map_err(|e: Error| bad(e.to_string()))?;
        let low_hz: u64 = fields[2]
            .parse()
            .map_err(|e| bad(format!("low_hz: {e}")))?;
        let high_hz: u64 = fields[3]
            .parse()
            .map_err(|e| bad(format!("high_hz: {e}")))?;
        if low_hz >= high_hz {
            return Err(bad(format!("low_hz {low_hz} must be below high_hz {high_hz}")));
        }
        let (applications, sensor_bandwidths) = match service {
            Service::Communications => (fields[4].to_string(), None),
            Service::ActiveSensing => {
                let mut map = BTreeMap::new();
                for pair in fields[4].split(';').filter(|p| !p.is_empty()) {
                    let (k, v) = pair
                        .split_once('=')
                        .ok_or_else(|| bad(format!("sensor entry `{pair}` lacks `=`")))?;
                    let sensor =
                        Sensor::from_key(k).ok_or_else(|| bad(format!("unknown sensor `{k}`")))?;
                    if map.insert(sensor, v.to_string()).is_some() {
                        return Err(bad(format!("duplicate sensor `{k}`")));
                    }
                }
                (String::new(), Some(map))
            }
        };
        Ok(BandRecord {
            service,
            band,
            low_hz,
            high_hz,
            applications,
            sensor_bandwidths,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    CommOnly,
    JcasColocated,
    Unallocated,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::CommOnly => "comm_only",
            Verdict::JcasColocated => "jcas_colocated",
            Verdict::Unallocated => "unallocated",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairingReport {
    pub carrier_in_comm_band: Option<BandLetter>,
    pub comm_band: Option<BandRecord>,
    pub overlapping_radar_allocations: Vec<BandRecord>,
    pub verdict: Verdict,
}

/// Immutable band database.
#[derive(Debug, Clone, PartialEq)]
pub struct Registry {
    records: Vec<BandRecord>,
}

impl Registry {
    /// The registry compiled from the shipped band database.
    pub fn builtin() -> Registry {
        Registry::parse(BUILTIN_DB).expect("shipped band database is well formed")
    }

    pub fn builtin_text() -> &'static str {
        BUILTIN_DB
    }

    pub fn parse(text: &str) -> Result<Registry> {
        let mut records = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            records.push(BandRecord::parse_line(line, i + 1)?);
        }
        let comm: Vec<&BandRecord> = records
            .iter()
            .filter(|r| r.service == Service::Communications)
            .collect();
        for (i, a) in comm.iter().enumerate() {
            for b in &comm[i + 1..] {
                if a.low_hz <= b.high_hz && b.low_hz <= a.high_hz {
                    return Err(Error::BandDatabase {
                        line: 0,
                        message: format!(
                            "communication bands {} and {} overlap",
                            a.describe(),
                            b.describe()
                        ),
                    });
                }
            }
        }
        Ok(Registry { records })
    }

    /// Serialize in the database file format, header included.
    pub fn to_text(&self) -> String {
        let mut out = String::from(HEADER);
        for r in &self.records {
            out.push_str(&r.to_line());
            out.push('\n');
        }
        out
    }

    pub fn records(&self) -> &[BandRecord] {
        &self.records
    }

    pub fn comm_bands(&self) -> impl Iterator<Item = &BandRecord> {
        self.records
            .iter()
            .filter(|r| r.service == Service::Communications)
    }

    pub fn radar_allocations(&self) -> impl Iterator<Item = &BandRecord> {
        self.records
            .iter()
            .filter(|r| r.service == Service::ActiveSensing)
    }

    /// The communication band containing `freq_ghz`, if any.
    pub fn lookup_comm_band(&self, freq_ghz: f64) -> Result<Option<&BandRecord>> {
        ensure_positive("freq_ghz", freq_ghz)?;
        let hz = freq_ghz * 1e9;
        Ok(self.comm_bands().find(|r| r.contains_hz(hz)))
    }

    /// Radar allocations intersecting `[low_ghz, high_ghz]`, sorted by lower edge.
    pub fn lookup_radar_allocations(&self, low_ghz: f64, high_ghz: f64) -> Result<Vec<&BandRecord>> {
        if !(low_ghz.is_finite() && high_ghz.is_finite() && low_ghz < high_ghz) {
            return Err(Error::domain(
                "freq_range_ghz",
                format!("expected low < high, got [{low_ghz}, {high_ghz}]"),
            ));
        }
        let (lo, hi) = (low_ghz * 1e9, high_ghz * 1e9);
        let mut hits: Vec<&BandRecord> = self
            .radar_allocations()
            .filter(|r| r.overlaps_hz(lo, hi))
            .collect();
        hits.sort_by_key(|r| r.low_hz);
        Ok(hits)
    }

    /// Joins both tables for a carrier occupying `bandwidth_mhz` around `carrier_ghz`.
    pub fn check_jcas_pairing(&self, carrier_ghz: f64, bandwidth_mhz: f64) -> Result<PairingReport> {
        ensure_positive("carrier_ghz", carrier_ghz)?;
        ensure_positive("bandwidth_mhz", bandwidth_mhz)?;
        let half = bandwidth_mhz * 1e-3 / 2.0;
        let comm = self.lookup_comm_band(carrier_ghz)?.cloned();
        let radar: Vec<BandRecord> = self
            .lookup_radar_allocations(carrier_ghz - half, carrier_ghz + half)?
            .into_iter()
            .cloned()
            .collect();
        let verdict = match (&comm, radar.is_empty()) {
            (Some(_), false) => Verdict::JcasColocated,
            (Some(_), true) => Verdict::CommOnly,
            (None, _) => Verdict::Unallocated,
        };
        Ok(PairingReport {
            carrier_in_comm_band: comm.as_ref().map(|r| r.band),
            comm_band: comm,
            overlapping_radar_allocations: radar,
            verdict,
        })
    }

    /// All records carrying the given band letter, communication rows first.
    pub fn by_letter(&self, band: BandLetter) -> Vec<&BandRecord> {
        let mut hits: Vec<&BandRecord> = self.records.iter().filter(|r| r.band == band).collect();
        hits.sort_by_key(|r| (r.service, r.low_hz));
        hits
    }
}
