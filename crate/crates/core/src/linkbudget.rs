//! Power accounting for the communications downlink and both radar
//! geometries. Everything is in dB; distances are converted to metres
//! before entering a spreading term.
//!
//! No noise figure, implementation loss or atmospheric attenuation is
//! modelled. Transmit power is spread uniformly over all subcarriers.

use std::f64::consts::PI;

use crate::constants::{BOLTZMANN, SPEED_OF_LIGHT};
use crate::error::{ensure_finite, ensure_positive, Error, Result};
use crate::geometry;
pub use crate::scenario::{ArrayGainModel, Scenario};
use crate::waveform::{OfdmNumerology, SubcarrierPlan};

fn db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// Friis free-space loss, dB.
pub fn fspl_db(freq_hz: f64, distance_m: f64) -> Result<f64> {
    ensure_positive("freq_hz", freq_hz)?;
    ensure_positive("distance_m", distance_m)?;
    Ok(20.0 * (4.0 * PI * distance_m * freq_hz / SPEED_OF_LIGHT).log10())
}

/// Thermal noise power `k·T·B`, dBW.
pub fn noise_power_dbw(temp_k: f64, bandwidth_hz: f64) -> Result<f64> {
    ensure_positive("noise_temp_k", temp_k)?;
    ensure_positive("bandwidth_hz", bandwidth_hz)?;
    Ok(db(BOLTZMANN * temp_k * bandwidth_hz))
}

/// Array gain under a fixed total radiated power.
pub fn array_gain_db(ref_gain_dbi: f64, n: u32, n_ref: u32) -> Result<f64> {
    array_gain_db_with(ArrayGainModel::FixedTotalPower, ref_gain_dbi, n, n_ref)
}

pub fn array_gain_db_with(model: ArrayGainModel, ref_gain_dbi: f64, n: u32, n_ref: u32) -> Result<f64> {
    ensure_finite("tx_gain_ref_dbi", ref_gain_dbi)?;
    if n == 0 {
        return Err(Error::domain("n_elements", "must be at least 1"));
    }
    if n_ref == 0 {
        return Err(Error::domain("n_elements_ref", "must be at least 1"));
    }
    Ok(ref_gain_dbi + model.db_per_decade() * (n as f64 / n_ref as f64).log10())
}

fn tx_array_gain(s: &Scenario) -> Result<f64> {
    array_gain_db_with(s.array_gain_model, s.tx_gain_ref_dbi, s.n_elements, s.n_elements_ref)
}

/// Downlink SNR at the user terminal over the full band.
///
/// The data subcarriers carry `data_fraction` of the power against
/// `data_fraction` of the noise, so the split cancels.
pub fn comm_snr_db(s: &Scenario) -> Result<f64> {
    Ok(s.tx_power_dbw + tx_array_gain(s)? + s.rx_gain_dbi
        - fspl_db(s.carrier_hz, s.d_sat_user_km * 1e3)?
        - noise_power_dbw(s.noise_temp_k, s.bandwidth_hz)?)
}

/// Per-term breakdown of one radar echo budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadarBudget {
    pub tx_gain_dbi: f64,
    pub rx_gain_dbi: f64,
    /// Sensing share of transmit power, dB (negative).
    pub power_split_db: f64,
    pub rx_power_dbw: f64,
    pub noise_dbw: f64,
    pub snr_single_db: f64,
    pub n_symbols: u64,
    pub integration_gain_db: f64,
    pub snr_integrated_db: f64,
}

/// General two-leg radar equation. `r1_m` is transmitter to target,
/// `r2_m` target to receiver.
pub fn radar_budget(
    s: &Scenario,
    plan: &SubcarrierPlan,
    num: &OfdmNumerology,
    r1_m: f64,
    r2_m: f64,
    rx_gain_dbi: f64,
) -> Result<RadarBudget> {
    ensure_positive("carrier_hz", s.carrier_hz)?;
    ensure_positive("rcs_m2", s.rcs_m2)?;
    ensure_positive("r_tx_target_m", r1_m)?;
    ensure_positive("r_target_rx_m", r2_m)?;
    if plan.n_sense == 0 {
        return Err(Error::domain("n_sense", "radar budget needs at least 1 sensing subcarrier"));
    }
    let tx_gain_dbi = tx_array_gain(s)?;
    let wavelength = SPEED_OF_LIGHT / s.carrier_hz;
    let power_split_db = db(plan.sense_fraction);
    let rx_power_dbw = s.tx_power_dbw + power_split_db + tx_gain_dbi + rx_gain_dbi
        + 20.0 * wavelength.log10()
        + db(s.rcs_m2)
        - 30.0 * (4.0 * PI).log10()
        - 20.0 * r1_m.log10()
        - 20.0 * r2_m.log10();
    let noise_dbw = noise_power_dbw(s.noise_temp_k, plan.sense_fraction * num.bandwidth_hz)?;
    let snr_single_db = rx_power_dbw - noise_dbw;
    let n_symbols = num.symbols_in(s.t_integration_s)?;
    if n_symbols == 0 {
        return Err(Error::ZeroSymbols {
            t_integration_s: s.t_integration_s,
        });
    }
    let integration_gain_db = db(n_symbols as f64);
    Ok(RadarBudget {
        tx_gain_dbi,
        rx_gain_dbi,
        power_split_db,
        rx_power_dbw,
        noise_dbw,
        snr_single_db,
        n_symbols,
        integration_gain_db,
        snr_integrated_db: snr_single_db + integration_gain_db,
    })
}

/// Satellite illuminates, ground receiver listens.
pub fn bistatic_radar_snr_db(s: &Scenario, plan: &SubcarrierPlan, num: &OfdmNumerology) -> Result<RadarBudget> {
    radar_budget(
        s,
        plan,
        num,
        s.d_sat_target_km * 1e3,
        s.d_target_rx_km * 1e3,
        s.radar_rx_gain_dbi,
    )
}

/// Satellite listens to its own echo through the transmit array.
pub fn monostatic_radar_snr_db(s: &Scenario, plan: &SubcarrierPlan, num: &OfdmNumerology) -> Result<RadarBudget> {
    let r = s.d_sat_target_km * 1e3;
    radar_budget(s, plan, num, r, r, tx_array_gain(s)?)
}

/// Every intermediate and final link-budget figure for one scenario.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkResult {
    pub tx_gain_dbi: f64,
    pub fspl_comm_db: f64,
    pub noise_comm_dbw: f64,
    pub comm_snr_db: f64,
    pub bistatic: RadarBudget,
    pub monostatic: RadarBudget,
    pub bistatic_range_km: f64,
    /// Altitude implied by the user slant range and elevation (diagnostic).
    pub implied_altitude_user_km: f64,
    /// Altitude implied by the target slant range and elevation (diagnostic).
    pub implied_altitude_target_km: f64,
    pub doppler_user_hz: f64,
    pub doppler_target_hz: f64,
    /// Doppler left after precompensation; zero when precompensated.
    pub residual_doppler_user_hz: f64,
    pub residual_doppler_target_hz: f64,
}

/// Evaluates the complete link budget for a validated scenario.
pub fn evaluate(s: &Scenario, plan: &SubcarrierPlan, num: &OfdmNumerology) -> Result<LinkResult> {
    let implied_altitude_user_km = geometry::altitude_from_slant_range(s.d_sat_user_km, s.elevation_user_deg)?;
    let implied_altitude_target_km =
        geometry::altitude_from_slant_range(s.d_sat_target_km, s.elevation_target_deg)?;
    let doppler_user_hz = geometry::doppler_shift(
        s.carrier_hz,
        geometry::radial_speed(implied_altitude_user_km, s.elevation_user_deg)?,
    )?;
    let doppler_target_hz = geometry::doppler_shift(
        s.carrier_hz,
        geometry::radial_speed(implied_altitude_target_km, s.elevation_target_deg)?,
    )?;
    let residual = |f: f64| if s.doppler_precompensated { 0.0 } else { f };
    Ok(LinkResult {
        tx_gain_dbi: tx_array_gain(s)?,
        fspl_comm_db: fspl_db(s.carrier_hz, s.d_sat_user_km * 1e3)?,
        noise_comm_dbw: noise_power_dbw(s.noise_temp_k, s.bandwidth_hz)?,
        comm_snr_db: comm_snr_db(s)?,
        bistatic: bistatic_radar_snr_db(s, plan, num)?,
        monostatic: monostatic_radar_snr_db(s, plan, num)?,
        bistatic_range_km: geometry::bistatic_range(s.d_sat_target_km, s.d_target_rx_km)?,
        implied_altitude_user_km,
        implied_altitude_target_km,
        doppler_user_hz,
        doppler_target_hz,
        residual_doppler_user_hz: residual(doppler_user_hz),
        residual_doppler_target_hz: residual(doppler_target_hz),
    })
}
