use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An input lies outside the domain of the operation.
    #[error("invalid `{param}`: {reason}")]
    Domain { param: &'static str, reason: String },

    #[error("subcarrier partition overflow: {n_data} data + {n_sense} sensing > {n_total} total")]
    PartitionOverflow {
        n_total: usize,
        n_data: usize,
        n_sense: usize,
    },

    /// The integration window holds no complete OFDM symbol.
    #[error("integration window of {t_integration_s} s contains zero OFDM symbols")]
    ZeroSymbols { t_integration_s: f64 },

    #[error("{location}: {message}")]
    Config { location: String, message: String },

    #[error("unknown band letter `{0}`")]
    UnknownBand(String),

    #[error("band database line {line}: {message}")]
    BandDatabase { line: usize, message: String },

    #[error("grid point (tx_power_dbw={tx_power_dbw}, n_elements={n_elements}): {source}")]
    AtGridPoint {
        tx_power_dbw: f64,
        n_elements: u32,
        #[source]
        source: Box<Error>,
    },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: {source}", path.display())]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

impl Error {
    pub(crate) fn domain(param: &'static str, reason: impl Into<String>) -> Self {
        Error::Domain {
            param,
            reason: reason.into(),
        }
    }

    /// True for errors caused by a malformed configuration rather than by
    /// physically invalid parameter values.
    pub fn is_config(&self) -> bool {
        match self {
            Error::Config { .. } => true,
            Error::AtGridPoint { source, .. } => source.is_config(),
            _ => false,
        }
    }
}

/// Fails with a domain error unless `value` is finite and strictly positive.
pub(crate) fn ensure_positive(param: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(param, format!("must be finite and > 0, got {value}")))
    }
}

pub(crate) fn ensure_finite(param: &'static str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(param, format!("must be finite, got {value}")))
    }
}
