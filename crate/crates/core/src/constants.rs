//! Pinned physical constants. Changing any of these changes every scenario
//! fingerprint, see [`CONSTANTS_VERSION`].

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Boltzmann constant, J/K.
pub const BOLTZMANN: f64 = 1.380649e-23;

/// Mean spherical Earth radius, km.
pub const EARTH_RADIUS_KM: f64 = 6371.0;

/// Standard gravitational parameter of the Earth, m^3/s^2.
pub const MU_EARTH: f64 = 3.986004418e14;

/// Bits carried by one QPSK symbol.
pub const QPSK_BITS_PER_SYMBOL: f64 = 2.0;

pub const CONSTANTS_VERSION: &str = "constants-v1";

/// Canonical text of every pinned constant, fed into scenario fingerprints.
pub fn canonical_text() -> String {
    format!(
        "{CONSTANTS_VERSION};c={SPEED_OF_LIGHT:e};k_b={BOLTZMANN:e};re_km={EARTH_RADIUS_KM:e};\
         mu={MU_EARTH:e};qpsk_bits={QPSK_BITS_PER_SYMBOL:e}"
    )
}
