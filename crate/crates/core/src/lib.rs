//! Link-level simulator for a bistatic joint communications and sensing
//! (JCAS) LEO satellite downlink.
//!
//! One OFDM waveform serves a ground user and illuminates an airborne
//! target whose echo is picked up by a separate ground receiver. The crate
//! evaluates the communications SNR and achievable rate, the bistatic (and,
//! for comparison, monostatic) radar SNR after coherent integration, and the
//! resulting range-estimation bound, over grids of transmit power and array
//! size. A small registry of satellite communication bands and spaceborne
//! radar allocations is included.
//!
//! ```
//! use jcas_core::{run_point, Scenario};
//!
//! let s = Scenario { tx_power_dbw: 9.0, ..Scenario::default() };
//! let (link, perf) = run_point(&s).unwrap();
//! assert!((link.comm_snr_db - 29.60).abs() < 0.05);
//! assert!(perf.shannon_rate_bps > 7.0e8);
//! ```

pub mod cli;
pub mod config;
pub mod constants;
pub mod error;
pub mod geometry;
pub mod linkbudget;
pub mod performance;
pub mod scenario;
pub mod spectrum;
pub mod sweep;
pub mod waveform;

pub use error::{Error, Result};
pub use linkbudget::{LinkResult, RadarBudget};
pub use performance::{PerformanceResult, SensingPerformance};
pub use scenario::{ArrayGainModel, Scenario};
pub use spectrum::{BandLetter, BandRecord, PairingReport, Registry, Verdict};
pub use sweep::{run_point, run_sweep, run_sweep_sequential, Mode, ResultTable, SweepSpec};
pub use waveform::{OfdmNumerology, SubcarrierPlan, TonePlacement};
