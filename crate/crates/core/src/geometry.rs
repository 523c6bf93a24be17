//! Spherical-Earth geometry for a circular LEO orbit.
//!
//! Distances are in km, angles in degrees at every public boundary. The
//! scenario's stated slant ranges are authoritative; the helpers here are
//! consistency utilities and diagnostics.

use crate::constants::{EARTH_RADIUS_KM, MU_EARTH, SPEED_OF_LIGHT};
use crate::error::{ensure_finite, ensure_positive, Error, Result};

fn check_elevation(elevation_deg: f64) -> Result<()> {
    if (0.0..=90.0).contains(&elevation_deg) {
        Ok(())
    } else {
        Err(Error::domain(
            "elevation_deg",
            format!("must lie in [0, 90], got {elevation_deg}"),
        ))
    }
}

/// Line-of-sight distance in km from a ground observer to a satellite at
/// `altitude_km`, seen at `elevation_deg` above the horizon.
pub fn slant_range(altitude_km: f64, elevation_deg: f64) -> Result<f64> {
    ensure_positive("altitude_km", altitude_km)?;
    check_elevation(elevation_deg)?;
    if elevation_deg == 90.0 {
        return Ok(altitude_km);
    }
    let re_sin = EARTH_RADIUS_KM * elevation_deg.to_radians().sin();
    let h = altitude_km;
    Ok(-re_sin + (re_sin * re_sin + h * h + 2.0 * EARTH_RADIUS_KM * h).sqrt())
}

/// Orbit altitude in km implied by a slant range seen at a given elevation.
/// Exact inverse of [`slant_range`].
pub fn altitude_from_slant_range(slant_range_km: f64, elevation_deg: f64) -> Result<f64> {
    ensure_positive("slant_range_km", slant_range_km)?;
    check_elevation(elevation_deg)?;
    let d = slant_range_km;
    let re = EARTH_RADIUS_KM;
    Ok((re * re + d * d + 2.0 * re * d * elevation_deg.to_radians().sin()).sqrt() - re)
}

/// Circular-orbit speed in m/s.
pub fn orbital_speed(altitude_km: f64) -> Result<f64> {
    ensure_positive("altitude_km", altitude_km)?;
    Ok(circular_speed(altitude_km))
}

fn circular_speed(altitude_km: f64) -> f64 {
    (MU_EARTH / ((EARTH_RADIUS_KM + altitude_km) * 1000.0)).sqrt()
}

/// Line-of-sight component of the satellite velocity, m/s, for an observer
/// in the orbital plane at the given elevation. Earth rotation is ignored.
///
/// The component is `v · Re/(Re+h) · cos(ε)`; it peaks at the horizon and
/// vanishes at zenith. Positive means approaching.
pub fn radial_speed(altitude_km: f64, elevation_deg: f64) -> Result<f64> {
    let v = orbital_speed(altitude_km)?;
    check_elevation(elevation_deg)?;
    Ok(v * EARTH_RADIUS_KM / (EARTH_RADIUS_KM + altitude_km) * elevation_deg.to_radians().cos())
}

/// Signed Doppler shift in Hz for a carrier seen at `radial_speed` m/s.
pub fn doppler_shift(carrier_hz: f64, radial_speed: f64) -> Result<f64> {
    ensure_positive("carrier_hz", carrier_hz)?;
    ensure_finite("radial_speed", radial_speed)?;
    Ok(carrier_hz * radial_speed / SPEED_OF_LIGHT)
}

/// Bistatic path length: transmitter to target plus target to receiver, km.
pub fn bistatic_range(r_tx_target_km: f64, r_target_rx_km: f64) -> Result<f64> {
    ensure_positive("r_tx_target_km", r_tx_target_km)?;
    ensure_positive("r_target_rx_km", r_target_rx_km)?;
    Ok(r_tx_target_km + r_target_rx_km)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn zenith_slant_range_is_altitude() {
        assert_eq!(slant_range(550.0, 90.0).unwrap(), 550.0);
        for h in [1.0, 106.0, 550.0, 1200.0, 35786.0] {
            assert_relative_eq!(slant_range(h, 90.0).unwrap(), h, max_relative = 1e-9);
        }
    }

    #[test]
    fn horizon_slant_range() {
        // sqrt(550^2 + 2*6371*550)
        let expected = 2703.812_123_650_606;
        assert_relative_eq!(slant_range(550.0, 0.0).unwrap(), expected, max_relative = 1e-12);
    }

    #[test]
    fn implied_altitude_for_500_km_at_10_deg() {
        // Bisection on slant_range alone, independent of the closed-form inverse.
        let (mut lo, mut hi) = (1.0_f64, 1000.0_f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if slant_range(mid, 10.0).unwrap() < 500.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let bisected = 0.5 * (lo + hi);
        assert!((bisected - 105.57).abs() < 0.01, "{bisected}");
        let closed = altitude_from_slant_range(500.0, 10.0).unwrap();
        assert_relative_eq!(closed, bisected, max_relative = 1e-9);
        assert_relative_eq!(slant_range(closed, 10.0).unwrap(), 500.0, max_relative = 1e-12);
    }

    #[test]
    fn slant_range_decreases_with_elevation() {
        let h = 550.0;
        let ranges: Vec<f64> = (0..50)
            .map(|i| slant_range(h, 90.0 * i as f64 / 49.0).unwrap())
            .collect();
        assert!(ranges.windows(2).all(|w| w[1] < w[0]));
        assert!(ranges.iter().all(|&d| d >= h));
    }

    #[test]
    fn slant_range_rejects_bad_inputs() {
        assert!(slant_range(-1.0, 10.0).is_err());
        assert!(slant_range(0.0, 10.0).is_err());
        assert!(slant_range(550.0, -0.1).is_err());
        assert!(slant_range(550.0, 90.1).is_err());
        assert!(slant_range(550.0, f64::NAN).is_err());
    }

    #[test]
    fn orbital_speed_values() {
        // Altitude zero is below the operation's domain; evaluate the law directly.
        assert_relative_eq!(circular_speed(0.0), 7909.792_402_654_085, max_relative = 1e-12);
        assert_relative_eq!(orbital_speed(550.0).unwrap(), 7588.998_434_594_858, max_relative = 1e-12);
        assert!(orbital_speed(550.0).unwrap() < circular_speed(0.0));
        assert!(orbital_speed(0.0).is_err());
        assert!(orbital_speed(-5.0).is_err());
    }

    #[test]
    fn doppler_values() {
        assert_eq!(doppler_shift(4.2e9, 0.0).unwrap(), 0.0);
        assert_relative_eq!(doppler_shift(4.2e9, 7585.2).unwrap(), 106_266.315_745_675, max_relative = 1e-9);
        assert_eq!(
            doppler_shift(4.2e9, -1000.0).unwrap(),
            -doppler_shift(4.2e9, 1000.0).unwrap()
        );
        assert!(doppler_shift(0.0, 1.0).is_err());
        assert!(doppler_shift(-4.2e9, 1.0).is_err());
    }

    #[test]
    fn radial_speed_limits() {
        assert!(radial_speed(550.0, 90.0).unwrap().abs() < 1e-9);
        let horizon = radial_speed(550.0, 0.0).unwrap();
        assert!(horizon > 0.0 && horizon < orbital_speed(550.0).unwrap());
    }

    #[test]
    fn bistatic_range_values() {
        assert_eq!(bistatic_range(490.0, 10.0).unwrap(), 500.0);
        assert_eq!(bistatic_range(1.0, 1.0).unwrap(), 2.0);
        assert_eq!(bistatic_range(3.0, 7.5).unwrap(), bistatic_range(7.5, 3.0).unwrap());
        assert!(bistatic_range(0.0, 1.0).is_err());
        assert!(bistatic_range(1.0, -1.0).is_err());
    }

    proptest! {
        #[test]
        fn doppler_is_linear(f in 1e6..1e11_f64, v in -1e4..1e4_f64) {
            prop_assert_eq!(doppler_shift(f, 2.0 * v).unwrap(), 2.0 * doppler_shift(f, v).unwrap());
        }

        #[test]
        fn speed_decreases_with_altitude(h1 in 1.0..40_000.0_f64, dh in 1e-3..1000.0_f64) {
            prop_assert!(orbital_speed(h1).unwrap() > orbital_speed(h1 + dh).unwrap());
        }

        #[test]
        fn altitude_inverse_round_trip(h in 1.0..2000.0_f64, e in 0.0..90.0_f64) {
            let d = slant_range(h, e).unwrap();
            let back = altitude_from_slant_range(d, e).unwrap();
            prop_assert!((back - h).abs() <= 1e-9 * h + 1e-8);
        }
    }
}
