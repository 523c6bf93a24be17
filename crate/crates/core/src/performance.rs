//! Turns link SNRs into communication rate and range accuracy.
//!
//! Range accuracy is the Cramér–Rao bound on echo delay for the sensing
//! comb's RMS bandwidth, mapped to bistatic-range (path-sum) error through
//! `c²`. It is a lower bound for any unbiased delay estimator, not the
//! output of a particular one.

use std::f64::consts::PI;

use crate::constants::{QPSK_BITS_PER_SYMBOL, SPEED_OF_LIGHT};
use crate::error::{ensure_finite, ensure_positive, Error, Result};
use crate::linkbudget::{LinkResult, RadarBudget};
use crate::scenario::Scenario;
use crate::waveform::{OfdmNumerology, SubcarrierPlan};

fn from_db(x: f64) -> f64 {
    10f64.powf(x / 10.0)
}

/// Which airtime and spectrum overheads are charged against the rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RateOverheads {
    pub cyclic_prefix: bool,
    pub non_data_subcarriers: bool,
}

impl Default for RateOverheads {
    fn default() -> Self {
        RateOverheads {
            cyclic_prefix: true,
            non_data_subcarriers: true,
        }
    }
}

impl RateOverheads {
    pub fn from_scenario(s: &Scenario) -> Self {
        RateOverheads {
            cyclic_prefix: s.rate_cp_overhead,
            non_data_subcarriers: s.rate_subcarrier_overhead,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rates {
    pub shannon_bps: f64,
    /// Shannon rate clipped at the QPSK symbol-rate ceiling.
    pub qpsk_capped_bps: f64,
}

pub fn achievable_rate(snr_db: f64, plan: &SubcarrierPlan, num: &OfdmNumerology) -> Result<Rates> {
    achievable_rate_with(snr_db, plan, num, RateOverheads::default())
}

pub fn achievable_rate_with(
    snr_db: f64,
    plan: &SubcarrierPlan,
    num: &OfdmNumerology,
    overheads: RateOverheads,
) -> Result<Rates> {
    ensure_finite("snr_db", snr_db)?;
    let (fraction, tones) = if overheads.non_data_subcarriers {
        (plan.data_fraction, plan.n_data)
    } else {
        (1.0, plan.n_total)
    };
    let (airtime, symbol_time) = if overheads.cyclic_prefix {
        (num.cp_overhead, num.t_symbol)
    } else {
        (1.0, num.t_useful)
    };
    let shannon_bps = fraction * airtime * num.bandwidth_hz * (1.0 + from_db(snr_db)).log2();
    let cap = tones as f64 * QPSK_BITS_PER_SYMBOL / symbol_time;
    Ok(Rates {
        shannon_bps,
        qpsk_capped_bps: shannon_bps.min(cap),
    })
}

/// Cramér–Rao bound on delay variance, s², for a post-integration SNR and
/// an RMS signal bandwidth in Hz.
pub fn delay_crlb(post_snr_db: f64, rms_bandwidth_hz: f64) -> Result<f64> {
    ensure_finite("post_snr_db", post_snr_db)?;
    ensure_positive("rms_bandwidth_hz", rms_bandwidth_hz)?;
    Ok(1.0 / (8.0 * PI * PI * rms_bandwidth_hz * rms_bandwidth_hz * from_db(post_snr_db)))
}

/// Bistatic-range mean-square error (m²) and its root (m) for a delay variance.
pub fn range_mse(delay_variance_s2: f64) -> Result<(f64, f64)> {
    if delay_variance_s2.is_nan() || delay_variance_s2 < 0.0 {
        return Err(Error::domain(
            "delay_variance_s2",
            format!("must be >= 0, got {delay_variance_s2}"),
        ));
    }
    let mse = SPEED_OF_LIGHT * SPEED_OF_LIGHT * delay_variance_s2;
    Ok((mse, mse.sqrt()))
}

/// Inclusive threshold test.
pub fn detection_feasible(post_snr_db: f64, threshold_db: f64) -> bool {
    post_snr_db >= threshold_db
}

/// Effective SNR after inter-carrier interference from an uncorrected
/// frequency offset.
///
/// With normalized offset `ε = f_d / Δf`, the useful tone keeps
/// `sinc²(ε)` of its power and the remainder leaks onto neighbours as
/// interference: `S·sinc² / (N + S·(1 − sinc²))`.
pub fn ici_effective_snr_db(snr_db: f64, doppler_hz: f64, subcarrier_spacing_hz: f64) -> Result<f64> {
    ensure_finite("snr_db", snr_db)?;
    ensure_finite("doppler_hz", doppler_hz)?;
    ensure_positive("subcarrier_spacing_hz", subcarrier_spacing_hz)?;
    if doppler_hz == 0.0 {
        return Ok(snr_db);
    }
    let eps = doppler_hz / subcarrier_spacing_hz;
    let sinc = (PI * eps).sin() / (PI * eps);
    let kept = sinc * sinc;
    let snr = from_db(snr_db);
    Ok(10.0 * (snr * kept / (1.0 + snr * (1.0 - kept))).log10())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensingPerformance {
    /// Post-integration SNR after any Doppler penalty, dB.
    pub effective_snr_db: f64,
    pub delay_variance_s2: f64,
    pub range_mse_m2: f64,
    pub range_rmse_m: f64,
    pub detection_feasible: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerformanceResult {
    /// Communications SNR after any Doppler penalty, dB.
    pub effective_comm_snr_db: f64,
    pub shannon_rate_bps: f64,
    pub qpsk_capped_rate_bps: f64,
    pub rms_bandwidth_hz: f64,
    pub bistatic: SensingPerformance,
    pub monostatic: SensingPerformance,
}

fn sensing(
    budget: &RadarBudget,
    residual_doppler_hz: f64,
    num: &OfdmNumerology,
    rms_bandwidth_hz: f64,
    threshold_db: f64,
) -> Result<SensingPerformance> {
    // The penalty acts per symbol, before coherent integration.
    let single = ici_effective_snr_db(budget.snr_single_db, residual_doppler_hz, num.subcarrier_spacing_hz)?;
    let effective_snr_db = single + budget.integration_gain_db;
    let delay_variance_s2 = delay_crlb(effective_snr_db, rms_bandwidth_hz)?;
    let (range_mse_m2, range_rmse_m) = range_mse(delay_variance_s2)?;
    Ok(SensingPerformance {
        effective_snr_db,
        delay_variance_s2,
        range_mse_m2,
        range_rmse_m,
        detection_feasible: detection_feasible(effective_snr_db, threshold_db),
    })
}

/// Derives every plotted metric from a link budget.
pub fn evaluate(
    s: &Scenario,
    link: &LinkResult,
    plan: &SubcarrierPlan,
    num: &OfdmNumerology,
    rms_bandwidth_hz: f64,
) -> Result<PerformanceResult> {
    let effective_comm_snr_db =
        ici_effective_snr_db(link.comm_snr_db, link.residual_doppler_user_hz, num.subcarrier_spacing_hz)?;
    let rates = achievable_rate_with(effective_comm_snr_db, plan, num, RateOverheads::from_scenario(s))?;
    Ok(PerformanceResult {
        effective_comm_snr_db,
        shannon_rate_bps: rates.shannon_bps,
        qpsk_capped_rate_bps: rates.qpsk_capped_bps,
        rms_bandwidth_hz,
        bistatic: sensing(
            &link.bistatic,
            link.residual_doppler_target_hz,
            num,
            rms_bandwidth_hz,
            s.detection_threshold_db,
        )?,
        // Both legs of the monostatic echo path move with the satellite.
        monostatic: sensing(
            &link.monostatic,
            2.0 * link.residual_doppler_target_hz,
            num,
            rms_bandwidth_hz,
            s.detection_threshold_db,
        )?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::waveform::{numerology, partition};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn case_study() -> (SubcarrierPlan, OfdmNumerology) {
        (partition(1024, 800, 224).unwrap(), numerology(1e8, 1024, 72).unwrap())
    }

    #[test]
    fn shannon_rate_at_full_power() {
        let (plan, num) = case_study();
        let r = achievable_rate(29.595_785_509_459_29, &plan, &num).unwrap();
        // 0.78125 * (10.24/10.96) * 1e8 * log2(1 + 10^(2.9596))
        assert_relative_eq!(r.shannon_bps, 717_743_772.891_21, max_relative = 1e-9);
        assert!((r.shannon_bps / 7.18e8 - 1.0).abs() < 0.01);
    }

    #[test]
    fn vanishing_snr_gives_no_rate() {
        let (plan, num) = case_study();
        let r = achievable_rate(-300.0, &plan, &num).unwrap();
        assert!(r.shannon_bps < 1e-20);
        assert_eq!(r.qpsk_capped_bps, r.shannon_bps);
    }

    #[test]
    fn qpsk_cap_at_high_snr() {
        let (plan, num) = case_study();
        let r = achievable_rate(60.0, &plan, &num).unwrap();
        // 800 * 2 / 10.96 us
        assert_relative_eq!(r.qpsk_capped_bps, 145_985_401.459_854, max_relative = 1e-9);
        assert!(r.qpsk_capped_bps < r.shannon_bps);
    }

    #[test]
    fn overhead_toggles() {
        let (plan, num) = case_study();
        let snr = 20.0;
        let both = achievable_rate(snr, &plan, &num).unwrap().shannon_bps;
        let no_cp = achievable_rate_with(snr, &plan, &num, RateOverheads { cyclic_prefix: false, non_data_subcarriers: true })
            .unwrap()
            .shannon_bps;
        let no_sc = achievable_rate_with(snr, &plan, &num, RateOverheads { cyclic_prefix: true, non_data_subcarriers: false })
            .unwrap()
            .shannon_bps;
        assert_relative_eq!(no_cp / both, 10.96 / 10.24, max_relative = 1e-12);
        assert_relative_eq!(no_sc / both, 1.0 / 0.78125, max_relative = 1e-12);
    }

    #[test]
    fn crlb_values() {
        let v = delay_crlb(0.0, 28.87e6).unwrap();
        // 1 / (8 pi^2 (28.87e6)^2)
        assert_relative_eq!(v, 1.519_555_965_533_324_5e-17, max_relative = 1e-12);
        assert_relative_eq!(delay_crlb(10.0, 28.87e6).unwrap(), v / 10.0, max_relative = 1e-12);
        assert_relative_eq!(delay_crlb(0.0, 2.0 * 28.87e6).unwrap(), v / 4.0, max_relative = 1e-12);
        assert!(delay_crlb(0.0, 0.0).is_err());
        assert!(delay_crlb(0.0, -1.0).is_err());
    }

    #[test]
    fn range_mse_values() {
        let (mse, rmse) = range_mse(1.520e-17).unwrap();
        assert_relative_eq!(mse, 1.366_107_871_679_962_6, max_relative = 1e-12);
        assert!((rmse / 1.17 - 1.0).abs() < 0.01);
        assert_eq!(range_mse(0.0).unwrap(), (0.0, 0.0));
        assert_relative_eq!(range_mse(4e-17).unwrap().0, 4.0 * range_mse(1e-17).unwrap().0, max_relative = 1e-15);
        assert!(range_mse(-1.0).is_err());
    }

    #[test]
    fn detection_threshold_is_inclusive() {
        assert!(!detection_feasible(3.1, 10.0));
        assert!(detection_feasible(10.0, 10.0));
        assert!(detection_feasible(10.5, 10.0));
        // Monostatic at 9 dBW: 3.15 dB bistatic, minus the 33.80 dB range penalty.
        assert!(!detection_feasible(3.152 - 33.804, 10.0));
    }

    #[test]
    fn rmse_halves_per_6_db() {
        let a = range_mse(delay_crlb(10.0, 2.9e7).unwrap()).unwrap().1;
        let b = range_mse(delay_crlb(10.0 + 20.0 * 2f64.log10(), 2.9e7).unwrap()).unwrap().1;
        assert_relative_eq!(a / b, 2.0, max_relative = 1e-12);
    }

    #[test]
    fn ici_penalty() {
        assert_eq!(ici_effective_snr_db(20.0, 0.0, 97_656.25).unwrap(), 20.0);
        let hurt = ici_effective_snr_db(20.0, 10_000.0, 97_656.25).unwrap();
        assert!(hurt < 20.0);
        let worse = ici_effective_snr_db(20.0, 30_000.0, 97_656.25).unwrap();
        assert!(worse < hurt);
        // Symmetric in the sign of the offset.
        assert_relative_eq!(
            ici_effective_snr_db(20.0, -10_000.0, 97_656.25).unwrap(),
            hurt,
            max_relative = 1e-12
        );
        // At low SNR only the sinc² loss matters.
        let eps: f64 = 0.1;
        let sinc2 = ((PI * eps).sin() / (PI * eps)).powi(2);
        let low = ici_effective_snr_db(-60.0, eps * 97_656.25, 97_656.25).unwrap();
        assert!((low - (-60.0 + 10.0 * sinc2.log10())).abs() < 1e-5);
    }

    proptest! {
        #[test]
        fn rate_strictly_increases_with_snr(a in -50.0..60.0_f64, d in 1e-3..10.0_f64) {
            let (plan, num) = case_study();
            let lo = achievable_rate(a, &plan, &num).unwrap().shannon_bps;
            let hi = achievable_rate(a + d, &plan, &num).unwrap().shannon_bps;
            prop_assert!(hi > lo);
        }

        #[test]
        fn crlb_scaling_laws(snr in -30.0..60.0_f64, bw in 1e5..1e9_f64) {
            let base = delay_crlb(snr, bw).unwrap();
            prop_assert!((delay_crlb(snr + 10.0, bw).unwrap() * 10.0 / base - 1.0).abs() < 1e-9);
            prop_assert!((delay_crlb(snr, 2.0 * bw).unwrap() * 4.0 / base - 1.0).abs() < 1e-9);
        }

        #[test]
        fn capped_is_min_of_shannon_and_cap(snr in -20.0..80.0_f64) {
            let (plan, num) = case_study();
            let r = achievable_rate(snr, &plan, &num).unwrap();
            let cap = 800.0 * 2.0 / num.t_symbol;
            prop_assert_eq!(r.qpsk_capped_bps, r.shannon_bps.min(cap));
        }
    }
}
