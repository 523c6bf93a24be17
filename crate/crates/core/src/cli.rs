//! Command-line front end: `simulate`, `sweep` and `bands`.
//!
//! Exit codes: 0 success, 1 domain error, 2 configuration error. Every
//! failure prints exactly one line to stderr, prefixed `error[domain]:` or
//! `error[config]:`.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::config;
use crate::error::{Error, Result};
use crate::linkbudget::{LinkResult, RadarBudget};
use crate::performance::{PerformanceResult, SensingPerformance};
use crate::spectrum::{BandLetter, BandRecord, Registry};
use crate::sweep::{self, Mode, SweepSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "jcas", version, about = "Bistatic JCAS LEO downlink simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Flat `key = value` config file; omitted keys take the case-study defaults.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Override one key (repeatable); beats the config file.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Radar geometry: comm, radar_bistatic, radar_monostatic or all.
    #[arg(long, value_name = "MODE")]
    mode: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate one scenario and print the full link-budget ledger.
    Simulate(Common),
    /// Sweep transmit power × array size and write a CSV table.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_name = "PATH")]
        out: PathBuf,
    },
    /// Look up a carrier frequency (GHz) or a band letter.
    Bands {
        query: String,
        #[command(flatten)]
        common: Common,
    },
}

fn load_spec(common: &Common) -> Result<SweepSpec> {
    let mut spec = match &common.config {
        Some(path) => config::load(path)?,
        None => SweepSpec::default(),
    };
    config::apply_overrides(&mut spec, &common.set)?;
    if let Some(m) = &common.mode {
        spec.mode = m.parse().map_err(|message| Error::Config {
            location: "--mode".into(),
            message,
        })?;
    }
    Ok(spec)
}

/// Parses `args` (program name first) and runs the command, writing the
/// report to `out` and any error line to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return EXIT_OK;
            }
            let first = e.to_string();
            let first = first.lines().next().unwrap_or("invalid arguments");
            let _ = writeln!(err, "error[config]: {}", first.trim_start_matches("error: "));
            return EXIT_CONFIG;
        }
    };
    let result = match &cli.command {
        Command::Simulate(common) => cmd_simulate(common, out),
        Command::Sweep { common, out: path } => cmd_sweep(common, path, out),
        Command::Bands { query, common } => cmd_bands(query, common, out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let (kind, code) = if e.is_config() {
                ("config", EXIT_CONFIG)
            } else {
                ("domain", EXIT_DOMAIN)
            };
            let line = e.to_string().replace('\n', " ");
            let _ = writeln!(err, "error[{kind}]: {line}");
            code
        }
    }
}

/// GHz rounded to the nearest kHz, so edges print without float noise.
fn round_khz(ghz: f64) -> f64 {
    (ghz * 1e6).round() / 1e6
}

fn io_err(e: std::io::Error) -> Error {
    Error::Io {
        path: PathBuf::from("<stdout>"),
        source: e,
    }
}

fn cmd_simulate(common: &Common, out: &mut dyn Write) -> Result<()> {
    let spec = load_spec(common)?;
    // Both radar geometries are reported unless --mode narrows the ledger.
    let shown = if common.mode.is_some() { spec.mode } else { Mode::All };
    let (link, perf) = sweep::run_point(&spec.base)?;
    let report = simulate_report(&spec, &link, &perf, shown);
    out.write_all(report.as_bytes()).map_err(io_err)
}

fn radar_section(title: &str, b: &RadarBudget, p: &SensingPerformance, threshold_db: f64) -> String {
    format!(
        "# {title}
{title}_tx_gain_dbi = {:.2}
{title}_rx_gain_dbi = {:.2}
{title}_power_split_db = {:.2}
{title}_rx_power_dbw = {:.2}
{title}_noise_dbw = {:.2}
{title}_snr_single_db = {:.2}
{title}_n_symbols = {}
{title}_integration_gain_db = {:.2}
{title}_snr_integrated_db = {:.2}
{title}_effective_snr_db = {:.2}
{title}_delay_variance_s2 = {:.6e}
{title}_range_mse_m2 = {:.6e}
{title}_range_rmse_m = {:.6e}
{title}_detection_threshold_db = {:.2}
{title}_detection_feasible = {}
",
        b.tx_gain_dbi,
        b.rx_gain_dbi,
        b.power_split_db,
        b.rx_power_dbw,
        b.noise_dbw,
        b.snr_single_db,
        b.n_symbols,
        b.integration_gain_db,
        b.snr_integrated_db,
        p.effective_snr_db,
        p.delay_variance_s2,
        p.range_mse_m2,
        p.range_rmse_m,
        threshold_db,
        p.detection_feasible,
    )
}

/// The full audit trail for one scenario, one `key = value` per line.
pub fn simulate_report(spec: &SweepSpec, link: &LinkResult, perf: &PerformanceResult, shown: Mode) -> String {
    let s = &spec.base;
    let mut r = String::from("# effective configuration\n");
    r.push_str(&config::render(spec));
    r.push_str(&format!("# fingerprint\nfingerprint = {}\n", sweep::fingerprint(s)));
    r.push_str(&format!(
        "# geometry
bistatic_range_km = {:.2}
implied_altitude_user_km = {:.2}
implied_altitude_target_km = {:.2}
doppler_user_hz = {:.2}
doppler_target_hz = {:.2}
residual_doppler_user_hz = {:.2}
residual_doppler_target_hz = {:.2}
",
        link.bistatic_range_km,
        link.implied_altitude_user_km,
        link.implied_altitude_target_km,
        link.doppler_user_hz,
        link.doppler_target_hz,
        link.residual_doppler_user_hz,
        link.residual_doppler_target_hz,
    ));
    r.push_str(&format!(
        "# communications
comm_tx_gain_dbi = {:.2}
comm_eirp_dbw = {:.2}
fspl_comm_db = {:.2}
noise_comm_dbw = {:.2}
comm_snr_db = {:.2}
effective_comm_snr_db = {:.2}
shannon_rate_bps = {:.6e}
qpsk_capped_rate_bps = {:.6e}
sensing_rms_bandwidth_hz = {:.6e}
",
        link.tx_gain_dbi,
        s.tx_power_dbw + link.tx_gain_dbi,
        link.fspl_comm_db,
        link.noise_comm_dbw,
        link.comm_snr_db,
        perf.effective_comm_snr_db,
        perf.shannon_rate_bps,
        perf.qpsk_capped_rate_bps,
        perf.rms_bandwidth_hz,
    ));
    let threshold = s.detection_threshold_db;
    if matches!(shown, Mode::RadarBistatic | Mode::All) {
        r.push_str(&radar_section("bistatic", &link.bistatic, &perf.bistatic, threshold));
    }
    if matches!(shown, Mode::RadarMonostatic | Mode::All) {
        r.push_str(&radar_section("monostatic", &link.monostatic, &perf.monostatic, threshold));
    }
    r
}

fn cmd_sweep(common: &Common, path: &Path, out: &mut dyn Write) -> Result<()> {
    let spec = load_spec(common)?;
    let table = sweep::run_sweep(&spec)?;
    sweep::emit_csv(&table, path)?;
    let sum = sweep::summarize(&table);
    let rmse = match (sum.min_rmse_m, sum.max_rmse_m) {
        (Some(lo), Some(hi)) => format!("rmse_m [{lo:.6e}, {hi:.6e}]"),
        _ => "rmse_m n/a".to_string(),
    };
    writeln!(
        out,
        "wrote {} rows to {}; shannon_rate_bps [{:.6e}, {:.6e}]; {rmse}",
        sum.rows,
        path.display(),
        sum.min_rate_bps,
        sum.max_rate_bps,
    )
    .map_err(io_err)
}

fn record_line(r: &BandRecord) -> String {
    match &r.sensor_bandwidths {
        None => format!("  {:<28} {}", r.describe(), r.applications),
        Some(map) => {
            let cells: Vec<String> = map.iter().map(|(s, bw)| format!("{}={bw}", s.key())).collect();
            format!("  {:<28} {}", r.describe(), cells.join("; "))
        }
    }
}

fn cmd_bands(query: &str, common: &Common, out: &mut dyn Write) -> Result<()> {
    let registry = Registry::builtin();
    let mut text = String::new();
    if let Ok(freq_ghz) = query.trim().parse::<f64>() {
        let spec = load_spec(common)?;
        let bw_mhz = spec.base.bandwidth_hz / 1e6;
        let report = registry.check_jcas_pairing(freq_ghz, bw_mhz)?;
        let comm = report
            .comm_band
            .as_ref()
            .map_or_else(|| "no communication band".to_string(), BandRecord::describe);
        let radar = if report.overlapping_radar_allocations.is_empty() {
            "none".to_string()
        } else {
            report
                .overlapping_radar_allocations
                .iter()
                .map(BandRecord::describe)
                .collect::<Vec<_>>()
                .join(", ")
        };
        text.push_str(&format!(
            "{comm}; radar allocations overlapping carrier: {radar}; verdict: {}\n",
            report.verdict.as_str()
        ));
        text.push_str(&format!(
            "occupied band: {}–{} GHz ({bw_mhz} MHz)\n",
            round_khz(freq_ghz - bw_mhz * 5e-4),
            round_khz(freq_ghz + bw_mhz * 5e-4)
        ));
        if let Some(c) = &report.comm_band {
            text.push_str(&format!("applications: {}\n", c.applications));
        }
        for r in &report.overlapping_radar_allocations {
            text.push_str(&record_line(r));
            text.push('\n');
        }
    } else {
        let letter = BandLetter::parse_loose(query).ok_or_else(|| Error::UnknownBand(query.to_string()))?;
        let hits = registry.by_letter(letter);
        let (comm, radar): (Vec<&BandRecord>, Vec<&BandRecord>) = hits
            .into_iter()
            .partition(|r| r.sensor_bandwidths.is_none());
        text.push_str(&format!("band {letter}\n"));
        text.push_str("communications:\n");
        if comm.is_empty() {
            text.push_str("  none\n");
        }
        for r in comm {
            text.push_str(&record_line(r));
            text.push('\n');
        }
        text.push_str("active sensing:\n");
        if radar.is_empty() {
            text.push_str("  none\n");
        }
        for r in radar {
            text.push_str(&record_line(r));
            text.push('\n');
        }
    }
    out.write_all(text.as_bytes()).map_err(io_err)
}
