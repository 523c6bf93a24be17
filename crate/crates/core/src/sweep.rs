//! Grid evaluation over transmit power × array size, and the CSV result
//! format.
//!
//! # CSV layout
//!
//! `#`-prefixed metadata lines (tool version, scenario fingerprint,
//! constants, axes, mode, base scenario), then a header and one line per
//! grid point:
//!
//! ```text
//! n_elements,tx_power_dbw,comm_snr_db,shannon_rate_bps,qpsk_capped_rate_bps,
//! radar_snr_single_db,radar_snr_integrated_db,range_mse_m2,range_rmse_m,
//! detection_feasible,mode
//! ```
//!
//! Floats carry 9 significant digits. Rows are ordered by `n_elements`, then
//! `tx_power_dbw`, so each curve is one contiguous block. In `comm` mode the
//! radar columns are empty; in `all` mode each grid point produces a
//! `radar_bistatic` line followed by a `radar_monostatic` line.

use std::cmp::Ordering;
use std::fmt;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::constants;
use crate::error::{Error, Result};
use crate::linkbudget::{self, LinkResult, RadarBudget};
use crate::performance::{self, PerformanceResult, SensingPerformance};
use crate::scenario::Scenario;
use crate::waveform::{self, OfdmNumerology, SubcarrierPlan};

pub const CSV_COLUMNS: [&str; 11] = [
    "n_elements",
    "tx_power_dbw",
    "comm_snr_db",
    "shannon_rate_bps",
    "qpsk_capped_rate_bps",
    "radar_snr_single_db",
    "radar_snr_integrated_db",
    "range_mse_m2",
    "range_rmse_m",
    "detection_feasible",
    "mode",
];

pub const TOOL_VERSION: &str = concat!("jcas-core ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    Comm,
    #[default]
    RadarBistatic,
    RadarMonostatic,
    All,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Comm => "comm",
            Mode::RadarBistatic => "radar_bistatic",
            Mode::RadarMonostatic => "radar_monostatic",
            Mode::All => "all",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "comm" => Ok(Mode::Comm),
            "radar_bistatic" => Ok(Mode::RadarBistatic),
            "radar_monostatic" => Ok(Mode::RadarMonostatic),
            "all" => Ok(Mode::All),
            other => Err(format!(
                "unknown mode `{other}` (expected comm, radar_bistatic, radar_monostatic or all)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub base: Scenario,
    pub power_axis: Vec<f64>,
    pub element_axis: Vec<u32>,
    pub mode: Mode,
}

pub fn default_power_axis() -> Vec<f64> {
    (1..=9).map(f64::from).collect()
}

pub fn default_element_axis() -> Vec<u32> {
    vec![1, 2, 4, 8, 16]
}

impl Default for SweepSpec {
    fn default() -> Self {
        SweepSpec {
            base: Scenario::default(),
            power_axis: default_power_axis(),
            element_axis: default_element_axis(),
            mode: Mode::default(),
        }
    }
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.power_axis.is_empty() {
            return Err(Error::domain("power_axis", "must not be empty"));
        }
        if self.element_axis.is_empty() {
            return Err(Error::domain("element_axis", "must not be empty"));
        }
        if let Some(p) = self.power_axis.iter().find(|p| !p.is_finite()) {
            return Err(Error::domain("power_axis", format!("non-finite power {p}")));
        }
        if self.element_axis.contains(&0) {
            return Err(Error::domain("element_axis", "element counts must be at least 1"));
        }
        Ok(())
    }

    /// The scenario evaluated at one grid point.
    pub fn scenario_at(&self, tx_power_dbw: f64, n_elements: u32) -> Scenario {
        Scenario {
            tx_power_dbw,
            n_elements,
            ..self.base.clone()
        }
    }

    /// Grid points in canonical order.
    pub fn grid(&self) -> Vec<(f64, u32)> {
        let mut points: Vec<(f64, u32)> = self
            .element_axis
            .iter()
            .flat_map(|&n| self.power_axis.iter().map(move |&p| (p, n)))
            .collect();
        points.sort_by(|a, b| canonical_order((a.0, a.1), (b.0, b.1)));
        points
    }
}

fn canonical_order(a: (f64, u32), b: (f64, u32)) -> Ordering {
    a.1.cmp(&b.1).then(a.0.total_cmp(&b.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub tx_power_dbw: f64,
    pub n_elements: u32,
    pub link: LinkResult,
    pub performance: PerformanceResult,
}

impl ResultRow {
    fn radar(&self, mode: Mode) -> Option<(&RadarBudget, &SensingPerformance)> {
        match mode {
            Mode::RadarBistatic => Some((&self.link.bistatic, &self.performance.bistatic)),
            Mode::RadarMonostatic => Some((&self.link.monostatic, &self.performance.monostatic)),
            Mode::Comm | Mode::All => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    pub rows: Vec<ResultRow>,
    pub mode: Mode,
    pub fingerprint: String,
    pub power_axis: Vec<f64>,
    pub element_axis: Vec<u32>,
    pub base: Scenario,
}

/// Hex SHA-256 over the canonical scenario text and the pinned constants.
pub fn fingerprint(s: &Scenario) -> String {
    let mut hasher = Sha256::new();
    for (k, v) in s.entries() {
        hasher.update(k.as_bytes());
        hasher.update(b"=");
        hasher.update(v.as_bytes());
        hasher.update(b"\n");
    }
    hasher.update(constants::canonical_text().as_bytes());
    hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Derived waveform quantities for a scenario.
pub fn waveform_of(s: &Scenario) -> Result<(SubcarrierPlan, OfdmNumerology, f64)> {
    let plan = waveform::partition(s.n_subcarriers, s.n_data, s.n_sense)?;
    let num = waveform::numerology(s.bandwidth_hz, s.n_subcarriers, s.n_cp)?;
    let rms = waveform::sensing_rms_bandwidth(&plan, &num, s.tone_placement)?;
    Ok((plan, num, rms))
}

/// Evaluates one scenario end to end.
pub fn run_point(s: &Scenario) -> Result<(LinkResult, PerformanceResult)> {
    s.validate()?;
    let (plan, num, rms) = waveform_of(s)?;
    let link = linkbudget::evaluate(s, &plan, &num)?;
    let perf = performance::evaluate(s, &link, &plan, &num, rms)?;
    Ok((link, perf))
}

fn eval_grid_point(spec: &SweepSpec, (p, n): (f64, u32)) -> Result<ResultRow> {
    let (link, performance) = run_point(&spec.scenario_at(p, n)).map_err(|e| Error::AtGridPoint {
        tx_power_dbw: p,
        n_elements: n,
        source: Box::new(e),
    })?;
    Ok(ResultRow {
        tx_power_dbw: p,
        n_elements: n,
        link,
        performance,
    })
}

fn assemble(spec: &SweepSpec, results: Vec<Result<ResultRow>>) -> Result<ResultTable> {
    let mut rows = results.into_iter().collect::<Result<Vec<_>>>()?;
    rows.sort_by(|a, b| canonical_order((a.tx_power_dbw, a.n_elements), (b.tx_power_dbw, b.n_elements)));
    Ok(ResultTable {
        rows,
        mode: spec.mode,
        fingerprint: fingerprint(&spec.base),
        power_axis: spec.power_axis.clone(),
        element_axis: spec.element_axis.clone(),
        base: spec.base.clone(),
    })
}

/// Evaluates every grid point in parallel. The first failing point in
/// canonical order is reported.
pub fn run_sweep(spec: &SweepSpec) -> Result<ResultTable> {
    spec.validate()?;
    let results: Vec<Result<ResultRow>> = spec
        .grid()
        .into_par_iter()
        .map(|pt| eval_grid_point(spec, pt))
        .collect();
    assemble(spec, results)
}

pub fn run_sweep_sequential(spec: &SweepSpec) -> Result<ResultTable> {
    spec.validate()?;
    let results = spec.grid().into_iter().map(|pt| eval_grid_point(spec, pt)).collect();
    assemble(spec, results)
}

fn sig9(x: f64) -> String {
    format!("{x:.8e}")
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

fn record_for(row: &ResultRow, mode: Mode) -> Vec<String> {
    let mut rec = vec![
        row.n_elements.to_string(),
        sig9(row.tx_power_dbw),
        sig9(row.link.comm_snr_db),
        sig9(row.performance.shannon_rate_bps),
        sig9(row.performance.qpsk_capped_rate_bps),
    ];
    match row.radar(mode) {
        Some((budget, sense)) => rec.extend([
            sig9(budget.snr_single_db),
            sig9(budget.snr_integrated_db),
            sig9(sense.range_mse_m2),
            sig9(sense.range_rmse_m),
            sense.detection_feasible.to_string(),
        ]),
        None => rec.extend(std::iter::repeat_n(String::new(), 5)),
    }
    rec.push(mode.to_string());
    rec
}

/// Writes the table in the CSV layout described at module level.
pub fn write_csv<W: Write>(table: &ResultTable, out: W) -> std::result::Result<(), csv::Error> {
    let mut out = BufWriter::new(out);
    writeln!(out, "# tool: {TOOL_VERSION}")?;
    writeln!(out, "# fingerprint: {}", table.fingerprint)?;
    writeln!(out, "# constants: {}", constants::canonical_text())?;
    writeln!(out, "# mode: {}", table.mode)?;
    writeln!(out, "# power_axis: {}", join(&table.power_axis))?;
    writeln!(out, "# element_axis: {}", join(&table.element_axis))?;
    let scenario: Vec<String> = table
        .base
        .entries()
        .into_iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect();
    writeln!(out, "# scenario: {}", scenario.join(";"))?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_COLUMNS)?;
    for row in &table.rows {
        match table.mode {
            Mode::All => {
                w.write_record(record_for(row, Mode::RadarBistatic))?;
                w.write_record(record_for(row, Mode::RadarMonostatic))?;
            }
            mode => w.write_record(record_for(row, mode))?,
        }
    }
    w.flush()?;
    Ok(())
}

pub fn emit_csv(table: &ResultTable, destination: &Path) -> Result<()> {
    let file = File::create(destination).map_err(|source| Error::Io {
        path: destination.to_path_buf(),
        source,
    })?;
    write_csv(table, file).map_err(|source| Error::Csv {
        path: destination.to_path_buf(),
        source,
    })
}

/// One parsed CSV line. Radar columns are `None` for `comm` rows.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub n_elements: u32,
    pub tx_power_dbw: f64,
    pub comm_snr_db: f64,
    pub shannon_rate_bps: f64,
    pub qpsk_capped_rate_bps: f64,
    pub radar_snr_single_db: Option<f64>,
    pub radar_snr_integrated_db: Option<f64>,
    pub range_mse_m2: Option<f64>,
    pub range_rmse_m: Option<f64>,
    pub detection_feasible: Option<bool>,
    pub mode: Mode,
}

/// Reads back a file produced by [`emit_csv`].
pub fn read_csv(path: &Path) -> Result<Vec<CsvRow>> {
    let csv_err = |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    };
    let bad = |line: usize, message: String| Error::Config {
        location: format!("{}:{line}", path.display()),
        message,
    };
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_path(path)
        .map_err(csv_err)?;
    let headers = reader.headers().map_err(csv_err)?.clone();
    if headers.iter().ne(CSV_COLUMNS.iter().copied()) {
        return Err(bad(0, format!("unexpected header {headers:?}")));
    }
    let mut rows = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(csv_err)?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        let num = |i: usize| -> Result<f64> {
            rec[i]
                .parse()
                .map_err(|_| bad(line, format!("column {} is not a number: `{}`", CSV_COLUMNS[i], &rec[i])))
        };
        let opt = |i: usize| -> Result<Option<f64>> {
            if rec[i].is_empty() {
                Ok(None)
            } else {
                num(i).map(Some)
            }
        };
        rows.push(CsvRow {
            n_elements: rec[0]
                .parse()
                .map_err(|_| bad(line, format!("bad n_elements `{}`", &rec[0])))?,
            tx_power_dbw: num(1)?,
            comm_snr_db: num(2)?,
            shannon_rate_bps: num(3)?,
            qpsk_capped_rate_bps: num(4)?,
            radar_snr_single_db: opt(5)?,
            radar_snr_integrated_db: opt(6)?,
            range_mse_m2: opt(7)?,
            range_rmse_m: opt(8)?,
            detection_feasible: match &rec[9] {
                "" => None,
                "true" => Some(true),
                "false" => Some(false),
                other => return Err(bad(line, format!("bad detection_feasible `{other}`"))),
            },
            mode: rec[10].parse().map_err(|m| bad(line, m))?,
        });
    }
    Ok(rows)
}

/// Row count plus the spread of the rate and RMSE columns.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub rows: usize,
    pub min_rate_bps: f64,
    pub max_rate_bps: f64,
    pub min_rmse_m: Option<f64>,
    pub max_rmse_m: Option<f64>,
}

pub fn summarize(table: &ResultTable) -> Summary {
    let rates = table.rows.iter().map(|r| r.performance.shannon_rate_bps);
    let rmses: Vec<f64> = table
        .rows
        .iter()
        .flat_map(|r| match table.mode {
            Mode::Comm => vec![],
            Mode::RadarBistatic => vec![r.performance.bistatic.range_rmse_m],
            Mode::RadarMonostatic => vec![r.performance.monostatic.range_rmse_m],
            Mode::All => vec![
                r.performance.bistatic.range_rmse_m,
                r.performance.monostatic.range_rmse_m,
            ],
        })
        .collect();
    let lines = match table.mode {
        Mode::All => 2 * table.rows.len(),
        _ => table.rows.len(),
    };
    Summary {
        rows: lines,
        min_rate_bps: rates.clone().fold(f64::INFINITY, f64::min),
        max_rate_bps: rates.fold(f64::NEG_INFINITY, f64::max),
        min_rmse_m: rmses.iter().copied().reduce(f64::min),
        max_rmse_m: rmses.iter().copied().reduce(f64::max),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_cardinality_and_order() {
        let t = run_sweep(&SweepSpec::default()).unwrap();
        assert_eq!(t.rows.len(), 45);
        let keys: Vec<(u32, f64)> = t.rows.iter().map(|r| (r.n_elements, r.tx_power_dbw)).collect();
        assert_eq!(keys[0], (1, 1.0));
        assert_eq!(keys[8], (1, 9.0));
        assert_eq!(keys[9], (2, 1.0));
        assert_eq!(keys[44], (16, 9.0));
    }

    #[test]
    fn single_point_sweep_equals_run_point() {
        let spec = SweepSpec {
            power_axis: vec![9.0],
            element_axis: vec![4],
            ..SweepSpec::default()
        };
        let t = run_sweep(&spec).unwrap();
        assert_eq!(t.rows.len(), 1);
        let (link, perf) = run_point(&spec.scenario_at(9.0, 4)).unwrap();
        assert_eq!(t.rows[0].link, link);
        assert_eq!(t.rows[0].performance, perf);
    }

    #[test]
    fn grid_errors_carry_coordinates() {
        let spec = SweepSpec {
            element_axis: vec![1, 0],
            ..SweepSpec::default()
        };
        assert!(run_sweep(&spec).is_err());
        let bad_base = SweepSpec {
            base: Scenario {
                rcs_m2: -1.0,
                ..Scenario::default()
            },
            power_axis: vec![3.0],
            element_axis: vec![2],
            ..SweepSpec::default()
        };
        let msg = run_sweep(&bad_base).unwrap_err().to_string();
        assert!(msg.contains("tx_power_dbw=3") && msg.contains("n_elements=2") && msg.contains("rcs_m2"), "{msg}");
    }

    #[test]
    fn empty_axes_rejected() {
        let spec = SweepSpec {
            power_axis: vec![],
            ..SweepSpec::default()
        };
        assert!(run_sweep(&spec).is_err());
    }

    #[test]
    fn fingerprint_tracks_every_field() {
        let base = Scenario::default();
        let fp = fingerprint(&base);
        assert_eq!(fp.len(), 64);
        assert_eq!(fp, fingerprint(&base.clone()));
        for (k, v) in base.entries() {
            let mut changed = base.clone();
            let alt = match k {
                "array_gain_model" => "per_element_power".to_string(),
                "tone_placement" => "block_edge".to_string(),
                "doppler_precompensated" | "rate_cp_overhead" | "rate_subcarrier_overhead" => {
                    (v != "true").to_string()
                }
                _ => {
                    let x: f64 = v.parse().unwrap();
                    (x + 1.0).to_string()
                }
            };
            changed.set(k, &alt).unwrap();
            assert_ne!(fingerprint(&changed), fp, "{k}");
        }
    }

    #[test]
    fn mode_text_round_trip() {
        for m in [Mode::Comm, Mode::RadarBistatic, Mode::RadarMonostatic, Mode::All] {
            assert_eq!(m.as_str().parse::<Mode>().unwrap(), m);
        }
        assert!("sonar".parse::<Mode>().is_err());
    }

    #[test]
    fn nine_significant_digits() {
        assert_eq!(sig9(29.595_785_509_459_29), "2.95957855e1");
        assert_eq!(sig9(-41.220_834_644), "-4.12208346e1");
        assert_eq!(sig9(1.0), "1.00000000e0");
    }
}
